#include <cstdio>
#include <fstream>
#include <sstream>

#include "cap4/cli.hpp"
#include "doctest.h"

using namespace cap4;

namespace {

std::string inst(const std::string& name) { return std::string(CAP4_SOURCE_DIR) + "/instances/" + name + ".json"; }

struct Run {
  int code;
  json report;
  std::string text;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, json::parse(out.str()), out.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("field element round trips") {
    auto Q = Field::rationals();
    for (auto x : {Q->from_int(0), Q->from_int(-7), Q->from_rational(mpq_class(3, 8))})
      CHECK(fe_from_json(Q, fe_to_json(x), "x") == x);
    CHECK(fe_to_json(Q->from_rational(mpq_class(-3, 8))) == json("-3/8"));
    auto G = Field::finite(2, 2);
    for (auto& x : G->elements()) CHECK(fe_from_json(G, fe_to_json(x), "x") == x);
    auto M = Field::multiquadratic({2, 3});
    Fe y = M->sqrt_radicand(0) + M->from_int(5) * M->sqrt_radicand(1);
    CHECK(fe_from_json(M, fe_to_json(y), "y") == y);
    CHECK_THROWS_AS(fe_from_json(Q, json("1/0"), "x"), SchemaError);
    CHECK_THROWS_AS(fe_from_json(G, json(4), "x"), SchemaError);
    auto q = QuadForm::diagonal(Q, std::vector<long>{1, -2, 3});
    CHECK(form_from_json(Q, form_to_json(q), "q").coeffs() == q.coeffs());
  }

  TEST_CASE("certificate round trip") {
    Instance in = load_instance(inst("hamilton_cube"));
    auto d = main_theorem_decide(*in.s);
    REQUIRE(d.cert);
    json j = json::parse(certificate_to_json(*d.cert).dump());
    auto back = certificate_from_json(in.F, j, in.s->alg().dim());
    REQUIRE(back.quats.size() == d.cert->quats.size());
    for (size_t t = 0; t < back.quats.size(); ++t)
      for (int i = 0; i < 4; ++i) CHECK(back.quats[t].basis[i] == d.cert->quats[t].basis[i]);
    CHECK(verify_certificate(*in.s, back).ok);
    CHECK(certificate_to_json(back) == certificate_to_json(*d.cert));
  }

  TEST_CASE("decide on the example files") {
    auto r = run({"decide", inst("hamilton_cube")});
    CHECK(r.code == kOk);
    CHECK(r.report["report"]["verdict"] == "decomposable");
    CHECK_FALSE(r.report["report"]["certificate"].is_null());
    auto a = run({"decide", inst("symplectic_d_minus_1")});
    CHECK(a.code == kOk);
    CHECK(a.report["report"]["verdict"] == "indecomposable");
    CHECK(a.report["report"]["hyperbolic"] == false);
  }

  TEST_CASE("analyze the switch involution on a double") {
    auto r = run({"analyze", inst("m4_double_switch")});
    CHECK(r.code == kOk);
    auto& rep = r.report["report"];
    CHECK(rep["type"] == "unitary");
    CHECK(rep["unitary_type"] == "inner");
    CHECK(rep["capacity"] == 4);
  }

  TEST_CASE("decompose then verify") {
    std::string path = "cli_test_certificate.json";
    auto d = run({"decompose", inst("symplectic_d_1"), "--json-out", path});
    REQUIRE(d.code == kOk);
    auto v = run({"verify", inst("symplectic_d_1"), path});
    CHECK(v.code == kOk);
    CHECK(v.report["ok"] == true);
    json bad = d.report;
    bad["certificate"]["quaternions"][0]["basis"][2][0] = "12345";
    std::ofstream(path) << bad.dump();
    auto rej = run({"verify", inst("symplectic_d_1"), path});
    CHECK(rej.code == kError);
    CHECK(rej.report["ok"] == false);
    std::remove(path.c_str());
    CHECK(run({"decompose", inst("symplectic_d_minus_1")}).code == kError);
  }

  TEST_CASE("exit codes and diagnostics") {
    CHECK(run({"crosscheck", inst("m4_double_switch")}).code == kNotFound);
    auto c = run({"crosscheck", inst("unitary_d_minus_1")});
    CHECK(c.code == kOk);
    CHECK(c.report["report"]["agree"] == true);
    std::string path = "cli_test_bad.json";
    std::ofstream(path) << R"({"field": {"kind": "rational"}, "factors": [{"type": "matrix", "n": 4, "involution": {"type": "adjoint", "diag": [1, 2]}}]})";
    auto b = run({"analyze", path});
    CHECK(b.code == kError);
    CHECK(b.report["error"].get<std::string>().find("factors[0].involution.diag") != std::string::npos);
    std::remove(path.c_str());
    std::ostringstream out, err;
    CHECK(run_cli({"nonsense"}, out, err) == kError);
  }

  TEST_CASE("reports are byte identical across runs") {
    auto a = run({"pfister", inst("unitary_d_1"), "--seed", "4"});
    auto b = run({"pfister", inst("unitary_d_1"), "--seed", "4"});
    CHECK(a.code == kOk);
    CHECK(a.text == b.text);
  }

  TEST_CASE("base change keeps the Gram matrices") {
    auto r = run({"basechange", inst("unitary_d_minus_1"), "--d", "2"});
    CHECK(r.code == kOk);
    CHECK(r.report["report"]["ok"] == true);
    CHECK(run({"basechange", inst("unitary_d_minus_1"), "--d", "9"}).report["report"]["identity"] == true);
  }
}
