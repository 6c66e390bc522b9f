#include "cap4/decide.hpp"

namespace cap4 {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Decomposable:
      return "decomposable";
    case Verdict::Indecomposable:
      return "indecomposable";
    case Verdict::Undecided:
      return "undecided";
  }
  return "";
}

Decision main_theorem_decide(const Involution& s, const DecideOptions& opt) {
  Decision d;
  PfisterOptions po;
  po.height_bound = opt.height_bound;
  po.seed = opt.seed;
  d.disc = discriminant_pfister(s, opt.L, po);
  if (!d.disc.pfister.hyperbolic) {
    d.diagnostics = "hyperbolicity is not decidable over this field";
    return d;
  }
  if (!*d.disc.pfister.hyperbolic) {
    d.verdict = Verdict::Indecomposable;
    return d;
  }
  d.verdict = Verdict::Decomposable;
  auto r = decompose_along_L(s, d.disc.L, {opt.height_bound, opt.seed, false});
  d.cert = std::move(r.cert);
  d.certificate_missing = !d.cert;
  d.diagnostics = r.diagnostics;
  return d;
}

}  // namespace cap4
