#pragma once

#include <optional>
#include <string>

#include "cap4/decomposer.hpp"

namespace cap4 {

enum class Verdict { Decomposable, Indecomposable, Undecided };
std::string to_string(Verdict v);

struct DecideOptions {
  int height_bound = 200;
  uint64_t seed = 0;
  std::optional<BiquadraticL> L;
};

struct Decision {
  Verdict verdict = Verdict::Undecided;
  DiscPfister disc;
  std::optional<DecompositionCertificate> cert;
  // hyperbolic but the bounded witness search found no certificate
  bool certificate_missing = false;
  std::string diagnostics;
};

Decision main_theorem_decide(const Involution& s, const DecideOptions& opt = {});

}  // namespace cap4
