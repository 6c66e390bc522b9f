#include "cap4/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>

#include "CLI11.hpp"

namespace cap4 {

namespace {

json opt_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

void require_capacity4(const Instance& in) {
  int cap = in.s->classification().capacity;
  if (cap != 4) throw std::invalid_argument("this command needs capacity 4, the instance has capacity " + std::to_string(cap));
}

json fe_list(const std::vector<Fe>& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(fe_to_json(x));
  return a;
}

json quaternion_instance(const std::string& name, json field, std::vector<std::pair<long, long>> quats, std::string expected) {
  json fs = json::array();
  for (auto [a, b] : quats) fs.push_back({{"type", "quaternion"}, {"a", a}, {"b", b}, {"involution", "canonical"}});
  return {{"name", name}, {"field", field}, {"factors", fs}, {"meta", {{"expected", expected}}}};
}

json adjoint_instance(const std::string& name, std::vector<long> diag, json extra, std::string expected) {
  json fs = json::array({{{"type", "matrix"}, {"n", 4}, {"involution", {{"type", "adjoint"}, {"diag", diag}}}}});
  if (!extra.is_null()) fs.push_back(extra);
  return {{"name", name}, {"field", {{"kind", "rational"}}}, {"factors", fs}, {"meta", {{"expected", expected}}}};
}

struct Flags {
  std::optional<int> height_bound;
  std::optional<uint64_t> seed;
  int jobs = 1;
};

void apply_flags(Instance& in, const Flags& f) {
  if (f.height_bound) in.height_bound = *f.height_bound;
  if (f.seed) in.seed = *f.seed;
}

DecideOptions decide_options(const Instance& in) {
  DecideOptions o;
  o.height_bound = in.height_bound;
  o.seed = in.seed;
  o.L = in.L;
  return o;
}

PfisterOptions pfister_options(const Instance& in, bool independence) {
  PfisterOptions o;
  o.height_bound = in.height_bound;
  o.seed = in.seed;
  o.check_independence = independence;
  return o;
}

json selftest_one(const json& spec, const Flags& flags) {
  json r;
  r["name"] = spec.value("name", "");
  std::string expected = spec["meta"].value("expected", "");
  r["expected"] = expected;
  try {
    Instance in = instance_from_json(spec);
    apply_flags(in, flags);
    auto d = main_theorem_decide(*in.s, decide_options(in));
    r["verdict"] = to_string(d.verdict);
    bool ok = to_string(d.verdict) == expected && d.disc.composition.ok && d.disc.direct_sum;
    if (d.verdict == Verdict::Decomposable) {
      bool cert_ok = false;
      if (d.cert) {
        auto back = certificate_from_json(in.F, json::parse(certificate_to_json(*d.cert).dump()), in.s->alg().dim());
        cert_ok = verify_certificate(*in.s, *d.cert).ok && verify_certificate(*in.s, back).ok;
      }
      r["certificate_verified"] = cert_ok;
      ok = ok && cert_ok;
    }
    auto shape = recognize_shape(in.factors);
    r["shape"] = to_string(shape.kind);
    if (shape.kind != ShapeKind::Generic && in.F->characteristic() != 2) {
      auto c = crosscheck(in.factors, *in.s, pfister_options(in, false));
      r["crosscheck_agree"] = c.agree;
      ok = ok && c.agree;
    }
    r["ok"] = ok;
  } catch (const std::exception& e) {
    r["ok"] = false;
    r["error"] = e.what();
  }
  return r;
}

}  // namespace

json analyze_report(const Instance& in) {
  const auto& c = in.s->classification();
  const auto& sp = in.s->spaces();
  json r{{"field", in.F->describe()},
         {"dim", in.s->alg().dim()},
         {"kind", to_string(c.kind)},
         {"type", to_string(c.type)},
         {"degree", c.deg},
         {"capacity", c.capacity},
         {"center_dim", c.center_dim},
         {"dims", {{"symm", sp.symm.size()}, {"skew", sp.skew.size()}, {"symd", sp.symd.size()}, {"alt", sp.alt.size()}}},
         {"shape", to_string(recognize_shape(in.factors).kind)}};
  if (c.type == InvType::Unitary) {
    const Algebra& A = in.s->alg();
    bool split = false;
    for (auto& z : in.s->center_basis())
      if (!A.as_scalar(z)) {
        auto q = as_quadratic(A, z);
        auto roots = quadratic_roots(*in.F, q->s, q->p);
        split = roots && roots->first != roots->second;
      }
    r["unitary_type"] = split ? "inner" : "outer";
  }
  return r;
}

json pfister_report(const DiscPfister& D) {
  json W = json::array(), qs = json::array();
  for (auto& w : D.W) {
    W.push_back(w.basis.size());
    qs.push_back(form_to_json(w.q));
  }
  json r{{"n", D.n},
         {"pfister", form_to_json(D.pfister.form)},
         {"hyperbolic", opt_bool(D.pfister.hyperbolic)},
         {"slots", D.pfister.slots ? fe_list(*D.pfister.slots) : json(nullptr)},
         {"c", fe_to_json(D.c)},
         {"L", {{"u1", vec_to_json(D.L.u1)}, {"u2", vec_to_json(D.L.u2)}}},
         {"W_dims", W},
         {"squaring_forms", qs},
         {"direct_sum", D.direct_sum},
         {"composition", {{"ok", D.composition.ok}, {"pairs", D.composition.pairs}, {"detail", D.composition.detail}}}};
  if (D.independent_of_L) r["independent_of_L"] = *D.independent_of_L;
  return r;
}

json decision_report(const Decision& d) {
  return {{"verdict", to_string(d.verdict)},
          {"hyperbolic", opt_bool(d.disc.pfister.hyperbolic)},
          {"pfister", form_to_json(d.disc.pfister.form)},
          {"certificate", d.cert ? certificate_to_json(*d.cert) : json(nullptr)},
          {"certificate_missing", d.certificate_missing},
          {"diagnostics", d.diagnostics}};
}

json crosscheck_report(const Crosscheck& c) {
  json r{{"shape", to_string(c.shape.kind)},
         {"formula_form", c.formula ? form_to_json(*c.formula) : json(nullptr)},
         {"pipeline_form", form_to_json(c.pipeline)},
         {"agree", c.agree},
         {"detail", c.detail}};
  if (c.shape.d) r["d"] = fe_to_json(*c.shape.d);
  if (c.w_variant) r["w_form"] = form_to_json(c.w_variant->form);
  return r;
}

std::vector<json> selftest_corpus() {
  json Q{{"kind", "rational"}};
  std::vector<json> c;
  c.push_back(quaternion_instance("hamilton_cube", Q, {{-1, -1}, {-1, -1}, {-1, -1}}, "decomposable"));
  c.push_back(quaternion_instance("symplectic_mixed", Q, {{-1, -1}, {2, 3}, {-1, 5}}, "decomposable"));
  c.push_back(quaternion_instance("orthogonal_hamilton_square", Q, {{-1, -1}, {-1, -1}}, "decomposable"));
  c.push_back(quaternion_instance("orthogonal_2_3_5_7", Q, {{2, 3}, {5, 7}}, "decomposable"));
  c.push_back(adjoint_instance("symplectic_d_minus_1", {1, 1, 1, -1}, {{"type", "quaternion"}, {"a", -1}, {"b", -1}, {"involution", "canonical"}},
                               "indecomposable"));
  c.push_back(adjoint_instance("symplectic_d_7", {1, 1, 1, 7}, {{"type", "quaternion"}, {"a", -1}, {"b", -1}, {"involution", "canonical"}},
                               "decomposable"));
  c.push_back(adjoint_instance("orthogonal_d_minus_1", {1, 1, 1, -1}, nullptr, "indecomposable"));
  c.push_back(adjoint_instance("unitary_d_1", {1, 1, 1, 1}, {{"type", "etale_center"}, {"d", 3}}, "decomposable"));
  c.push_back(adjoint_instance("unitary_d_minus_1", {1, 1, 1, -1}, {{"type", "etale_center"}, {"d", -1}}, "indecomposable"));
  c.push_back(quaternion_instance("gf2_cube", {{"kind", "finite"}, {"p", 2}, {"k", 1}}, {{1, 1}, {1, 1}, {1, 1}}, "decomposable"));
  c.push_back(quaternion_instance("gf4_cube", {{"kind", "finite"}, {"p", 2}, {"k", 2}}, {{1, 2}, {2, 1}, {3, 1}}, "decomposable"));
  c.push_back(quaternion_instance("gf5_cube", {{"kind", "finite"}, {"p", 5}, {"k", 1}}, {{2, 3}, {2, 3}, {2, 3}}, "decomposable"));
  return c;
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"capacity-4 algebras with involution: discriminant Pfister form and decompositions", "cap4"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  int hb = 0;
  uint64_t seed = 0;
  std::string json_out;
  auto* hb_opt = app.add_option("--height-bound", hb, "search height bound")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "search seed");
  app.add_option("--json-out", json_out, "also write the report to this file");
  app.add_option("--jobs", flags.jobs, "parallel instances in corpus mode")->check(CLI::PositiveNumber);

  std::string inst, cert_path;
  long d = 0;
  bool independence = false;
  auto add_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("instance", inst, "instance JSON file")->required();
    return c;
  };
  auto* analyze = add_cmd("analyze", "classify and report symmetric-space dimensions");
  auto* pfister = add_cmd("pfister", "discriminant Pfister form report");
  pfister->add_flag("--check-independence", independence, "compare against a second neat L");
  auto* decide = add_cmd("decide", "decide total decomposability");
  auto* decompose = add_cmd("decompose", "decomposition certificate");
  auto* verify = add_cmd("verify", "re-verify a certificate file");
  verify->add_option("certificate", cert_path, "certificate or decompose report JSON")->required();
  auto* cross = add_cmd("crosscheck", "closed-form formulas against the pipeline");
  auto* base = add_cmd("basechange", "extend scalars and compare Gram matrices");
  base->add_option("--d", d, "square-free integer to adjoin")->required();
  auto* self = app.add_subcommand("selftest", "run the built-in corpus");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kError;
  }
  if (*hb_opt) flags.height_bound = hb;
  if (*seed_opt) flags.seed = seed;

  json r;
  int code = kOk;
  try {
    if (self->parsed()) {
      r["command"] = "selftest";
      auto corpus = selftest_corpus();
      std::vector<json> results(corpus.size());
      for (size_t start = 0; start < corpus.size(); start += size_t(flags.jobs)) {
        std::vector<std::future<json>> fut;
        size_t end = std::min(corpus.size(), start + size_t(flags.jobs));
        for (size_t i = start; i < end; ++i) fut.push_back(std::async(std::launch::async, selftest_one, std::cref(corpus[i]), std::cref(flags)));
        for (size_t i = start; i < end; ++i) results[i] = fut[i - start].get();
      }
      int passed = 0;
      for (auto& x : results) passed += x["ok"].get<bool>();
      r["instances"] = results;
      r["passed"] = passed;
      r["total"] = results.size();
      r["status"] = passed == int(results.size()) ? "ok" : "failed";
      code = passed == int(results.size()) ? kOk : kError;
    } else {
      Instance in = load_instance(inst);
      apply_flags(in, flags);
      r["instance"] = in.name;
      if (analyze->parsed()) {
        r["command"] = "analyze";
        r["report"] = analyze_report(in);
      } else if (pfister->parsed()) {
        r["command"] = "pfister";
        require_capacity4(in);
        r["report"] = pfister_report(discriminant_pfister(*in.s, in.L, pfister_options(in, independence)));
      } else if (decide->parsed()) {
        r["command"] = "decide";
        require_capacity4(in);
        r["report"] = decision_report(main_theorem_decide(*in.s, decide_options(in)));
      } else if (decompose->parsed()) {
        r["command"] = "decompose";
        require_capacity4(in);
        auto dec = main_theorem_decide(*in.s, decide_options(in));
        if (dec.verdict != Verdict::Decomposable)
          throw std::invalid_argument("the discriminant Pfister form is not hyperbolic (verdict " + to_string(dec.verdict) + ")");
        if (!dec.cert) {
          r["status"] = "NOT_FOUND";
          r["diagnostics"] = dec.diagnostics;
          code = kNotFound;
        } else {
          r["certificate"] = certificate_to_json(*dec.cert);
        }
      } else if (verify->parsed()) {
        r["command"] = "verify";
        json cj = read_json_file(cert_path);
        if (cj.contains("certificate")) cj = cj["certificate"];
        auto cert = certificate_from_json(in.F, cj, in.s->alg().dim());
        auto v = verify_certificate(*in.s, cert);
        r["ok"] = v.ok;
        r["detail"] = v.detail;
        if (!v.ok) {
          r["status"] = "rejected";
          code = kError;
        }
      } else if (cross->parsed()) {
        r["command"] = "crosscheck";
        require_capacity4(in);
        auto c = crosscheck(in.factors, *in.s, pfister_options(in, false));
        r["report"] = crosscheck_report(c);
        if (!c.formula) {
          r["status"] = "NOT_FOUND";
          code = kNotFound;
        } else if (!c.agree) {
          r["status"] = "disagree";
          code = kError;
        }
      } else if (base->parsed()) {
        r["command"] = "basechange";
        require_capacity4(in);
        auto D = discriminant_pfister(*in.s, in.L, pfister_options(in, false));
        auto f = functoriality_check(in.s, D, in.F->from_int(d));
        json ext = json::array(), rec = json::array();
        for (int i = 0; i < 3; ++i) {
          ext.push_back(form_to_json(f.extended[i]));
          rec.push_back(form_to_json(f.recomputed[i]));
        }
        r["report"] = {{"d", d}, {"field", f.field->describe()}, {"identity", f.identity}, {"ok", f.ok},
                       {"detail", f.detail}, {"extended", ext}, {"recomputed", rec}};
        if (!f.ok) {
          r["status"] = "failed";
          code = kError;
        }
      }
    }
    if (!r.contains("status")) r["status"] = "ok";
  } catch (const NotFound& e) {
    r["status"] = "NOT_FOUND";
    r["error"] = e.what();
    code = kNotFound;
  } catch (const std::exception& e) {
    r["status"] = "error";
    r["error"] = e.what();
    err << "error: " << e.what() << "\n";
    code = kError;
  }
  std::string text = r.dump(2) + "\n";
  out << text;
  if (!json_out.empty()) {
    std::ofstream f(json_out);
    if (!f) {
      err << "error: cannot write " << json_out << "\n";
      return kError;
    }
    f << text;
  }
  return code;
}

}  // namespace cap4
