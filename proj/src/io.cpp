#include "cap4/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cap4 {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw SchemaError(path + ": " + what); }

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

long need_int(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
  return v.get<long>();
}

mpq_class parse_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (!j.is_string()) bad(path, "expected an integer or a string \"a/b\"");
  std::string s = j.get<std::string>();
  auto slash = s.find('/');
  mpz_class num, den = 1;
  if (num.set_str(s.substr(0, slash), 10) != 0) bad(path, "malformed number \"" + s + "\"");
  if (slash != std::string::npos && den.set_str(s.substr(slash + 1), 10) != 0) bad(path, "malformed number \"" + s + "\"");
  if (den == 0) bad(path, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

std::string idx(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

AlgebraPtr algebra_from_json(const FieldPtr& F, const json& f, const std::string& path, std::string& type) {
  const json& t = need(f, "type", path);
  if (!t.is_string()) bad(path + ".type", "expected a string");
  type = t.get<std::string>();
  if (type == "quaternion") {
    Fe a = fe_from_json(F, need(f, "a", path), path + ".a");
    Fe b = fe_from_json(F, need(f, "b", path), path + ".b");
    try {
      return quaternion_algebra(F, a, b);
    } catch (const std::invalid_argument& e) {
      bad(path, e.what());
    }
  }
  if (type == "matrix") {
    long n = need_int(f, "n", path);
    if (n < 1 || n > 16) bad(path + ".n", "matrix size out of range");
    return matrix_algebra(F, int(n));
  }
  if (type == "etale_center") return etale_quadratic(F, fe_from_json(F, need(f, "d", path), path + ".d"));
  if (type == "double") {
    std::string bt;
    auto base = algebra_from_json(F, need(f, "base", path), path + ".base", bt);
    if (bt == "double" || bt == "etale_center") bad(path + ".base", "base must be a quaternion or matrix algebra");
    return double_algebra(base);
  }
  bad(path + ".type", "unknown factor type \"" + type + "\"");
}

InvolutionPtr involution_from_json(const AlgebraPtr& A, const std::string& type, const json& f, const std::string& path) {
  const FieldPtr& F = A->field();
  if (type == "etale_center") return canonical_involution(A);
  if (type == "double") return switch_involution(A);
  const json& inv = need(f, "involution", path);
  std::string p = path + ".involution";
  std::string kind;
  if (inv.is_string()) {
    kind = inv.get<std::string>();
  } else {
    const json& k = need(inv, "type", p);
    if (!k.is_string()) bad(p + ".type", "expected a string");
    kind = k.get<std::string>();
  }
  if (type == "quaternion") {
    if (kind == "canonical") return canonical_involution(A);
    if (kind == "orthogonal") {
      Vec s = vec_from_json(F, need(inv, "s", p), p + ".s", 4);
      try {
        return orthogonal_quaternion_involution(A, s);
      } catch (const std::invalid_argument& e) {
        bad(p + ".s", e.what());
      }
    }
    bad(p, "quaternion involution must be \"canonical\" or orthogonal");
  }
  int n = A->provenance().n;
  if (kind == "transpose") return transpose_involution(A);
  if (kind == "adjoint") {
    const json& d = need(inv, "diag", p);
    if (!d.is_array() || int(d.size()) != n) bad(p + ".diag", "expected " + std::to_string(n) + " entries");
    std::vector<Fe> diag;
    for (size_t i = 0; i < d.size(); ++i) {
      diag.push_back(fe_from_json(F, d[i], idx(p + ".diag", i)));
      if (diag.back().is_zero()) bad(idx(p + ".diag", i), "diagonal entry is zero");
    }
    return adjoint_involution(A, diag);
  }
  if (kind == "gram") {
    const json& g = need(inv, "matrix", p);
    if (!g.is_array() || int(g.size()) != n) bad(p + ".matrix", "expected " + std::to_string(n) + " rows");
    Mat m(*F, n, n);
    for (int i = 0; i < n; ++i) {
      Vec row = vec_from_json(F, g[i], idx(p + ".matrix", i), n);
      for (int k = 0; k < n; ++k) m(i, k) = row[k];
    }
    try {
      return adjoint_gram_involution(A, m);
    } catch (const std::invalid_argument& e) {
      bad(p + ".matrix", e.what());
    }
  }
  bad(p, "unknown matrix involution \"" + kind + "\"");
}

}  // namespace

json field_to_json(const Field& F) {
  switch (F.kind()) {
    case FieldKind::Rational: return {{"kind", "rational"}};
    case FieldKind::Finite: return {{"kind", "finite"}, {"p", F.p()}, {"k", F.k()}};
    default: return {{"kind", "multiquadratic"}, {"radicands", F.radicands()}};
  }
}

FieldPtr field_from_json(const json& j, const std::string& path) {
  const json& k = need(j, "kind", path);
  if (!k.is_string()) bad(path + ".kind", "expected a string");
  std::string kind = k.get<std::string>();
  try {
    if (kind == "rational") return Field::rationals();
    if (kind == "finite") {
      long p = need_int(j, "p", path);
      long deg = j.contains("k") ? need_int(j, "k", path) : 1;
      if (p < 2) bad(path + ".p", "not a prime");
      return Field::finite(uint64_t(p), int(deg));
    }
    if (kind == "multiquadratic") {
      const json& r = need(j, "radicands", path);
      if (!r.is_array()) bad(path + ".radicands", "expected an array");
      std::vector<long> rad;
      for (size_t i = 0; i < r.size(); ++i) {
        if (!r[i].is_number_integer()) bad(idx(path + ".radicands", i), "expected an integer");
        rad.push_back(r[i].get<long>());
      }
      return Field::multiquadratic(rad);
    }
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  bad(path + ".kind", "unknown field kind \"" + kind + "\"");
}

json fe_to_json(const Fe& x) {
  const Field& F = *x.field();
  switch (F.kind()) {
    case FieldKind::Rational: return x.rat().get_str();
    case FieldKind::Finite: return x.str();
    default: {
      json a = json::array();
      for (auto& c : x.coords()) a.push_back(c.get_str());
      return a;
    }
  }
}

Fe fe_from_json(const FieldPtr& F, const json& j, const std::string& path) {
  switch (F->kind()) {
    case FieldKind::Rational: return F->from_rational(parse_rational(j, path));
    case FieldKind::Finite: {
      mpq_class q = parse_rational(j, path);
      if (q.get_den() != 1 || q < 0 || q >= mpq_class(mpz_class(std::to_string(F->order()))))
        bad(path, "expected a packed field element in [0, " + std::to_string(F->order()) + ")");
      return F->from_packed(q.get_num().get_ui());
    }
    default: {
      if (!j.is_array()) return F->from_rational(parse_rational(j, path));
      if (int(j.size()) != F->mq_dim()) bad(path, "expected " + std::to_string(F->mq_dim()) + " coordinates");
      std::vector<mpq_class> c;
      for (size_t i = 0; i < j.size(); ++i) c.push_back(parse_rational(j[i], idx(path, i)));
      return F->from_coords(c);
    }
  }
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(fe_to_json(x));
  return a;
}

Vec vec_from_json(const FieldPtr& F, const json& j, const std::string& path, int expected_len) {
  if (!j.is_array()) bad(path, "expected an array");
  if (expected_len >= 0 && int(j.size()) != expected_len)
    bad(path, "expected " + std::to_string(expected_len) + " entries, found " + std::to_string(j.size()));
  Vec v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(fe_from_json(F, j[i], idx(path, i)));
  return v;
}

json form_to_json(const QuadForm& q) {
  json rows = json::array();
  for (int i = 0; i < q.dim(); ++i) {
    Vec r;
    for (int k = 0; k < q.dim(); ++k) r.push_back(q.coeffs()(i, k));
    rows.push_back(vec_to_json(r));
  }
  return {{"dim", q.dim()}, {"upper", rows}};
}

QuadForm form_from_json(const FieldPtr& F, const json& j, const std::string& path) {
  long n = need_int(j, "dim", path);
  const json& rows = need(j, "upper", path);
  if (!rows.is_array() || long(rows.size()) != n) bad(path + ".upper", "expected " + std::to_string(n) + " rows");
  Mat c(*F, int(n), int(n));
  for (int i = 0; i < n; ++i) {
    Vec r = vec_from_json(F, rows[i], idx(path + ".upper", i), int(n));
    for (int k = 0; k < n; ++k) {
      if (k < i && !r[k].is_zero()) bad(idx(path + ".upper", i), "entries below the diagonal must be zero");
      c(i, k) = r[k];
    }
  }
  return QuadForm(F, c);
}

json certificate_to_json(const DecompositionCertificate& c) {
  json qs = json::array();
  for (auto& q : c.quats) {
    json b = json::array();
    for (auto& v : q.basis) b.push_back(vec_to_json(v));
    qs.push_back({{"basis", b}, {"alpha", fe_to_json(q.alpha)}, {"beta", fe_to_json(q.beta)}, {"delta", fe_to_json(q.delta)}});
  }
  json L = json::array();
  for (auto& v : c.aligned_L) L.push_back(vec_to_json(v));
  return {{"quaternions", qs}, {"aligned_L", L}};
}

DecompositionCertificate certificate_from_json(const FieldPtr& F, const json& j, int dim) {
  std::string path = "certificate";
  DecompositionCertificate c;
  const json& qs = need(j, "quaternions", path);
  if (!qs.is_array()) bad(path + ".quaternions", "expected an array");
  for (size_t t = 0; t < qs.size(); ++t) {
    std::string p = idx(path + ".quaternions", t);
    const json& b = need(qs[t], "basis", p);
    if (!b.is_array() || b.size() != 4) bad(p + ".basis", "expected 4 vectors");
    QuatBasis q;
    for (size_t i = 0; i < 4; ++i) q.basis[i] = vec_from_json(F, b[i], idx(p + ".basis", i), dim);
    q.alpha = fe_from_json(F, need(qs[t], "alpha", p), p + ".alpha");
    q.beta = fe_from_json(F, need(qs[t], "beta", p), p + ".beta");
    q.delta = fe_from_json(F, need(qs[t], "delta", p), p + ".delta");
    c.quats.push_back(std::move(q));
  }
  if (j.contains("aligned_L")) {
    const json& L = j["aligned_L"];
    if (!L.is_array()) bad(path + ".aligned_L", "expected an array");
    for (size_t i = 0; i < L.size(); ++i) c.aligned_L.push_back(vec_from_json(F, L[i], idx(path + ".aligned_L", i), dim));
  }
  return c;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) bad("instance", "expected an object");
  Instance in;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("name", "expected a string");
    in.name = j["name"].get<std::string>();
  }
  in.F = field_from_json(need(j, "field", "instance"), "field");
  const json& fs = need(j, "factors", "instance");
  if (!fs.is_array() || fs.empty()) bad("factors", "expected a nonempty array");
  for (size_t t = 0; t < fs.size(); ++t) {
    std::string p = idx("factors", t), type;
    auto A = algebra_from_json(in.F, fs[t], p, type);
    auto s = involution_from_json(A, type, fs[t], p);
    in.factors.push_back(s);
    in.s = in.s ? tensor_involution(in.s, s) : s;
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    if (o.contains("height_bound")) in.height_bound = int(need_int(o, "height_bound", "options"));
    if (o.contains("seed")) in.seed = uint64_t(need_int(o, "seed", "options"));
  }
  if (j.contains("L")) {
    int n = in.s->alg().dim();
    Vec u1 = vec_from_json(in.F, need(j["L"], "u1", "L"), "L.u1", n);
    Vec u2 = vec_from_json(in.F, need(j["L"], "u2", "L"), "L.u2", n);
    try {
      in.L = make_biquadratic(in.s->alg(), u1, u2);
    } catch (const std::exception& e) {
      bad("L", e.what());
    }
  }
  if (j.contains("meta")) in.meta = j["meta"];
  return in;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    std::string text = ss.str();
    size_t pos = std::min(e.byte, text.size());
    int line = 1 + int(std::count(text.begin(), text.begin() + long(pos), '\n'));
    throw SchemaError(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

Instance load_instance(const std::string& path) {
  json j = read_json_file(path);
  try {
    return instance_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace cap4
