#pragma once

#include <optional>
#include <vector>

#include "prenexify/formula.hpp"

namespace prenexify {

enum class PrenexKind : std::uint8_t { Sigma, Pi };

struct PrenexShape {
  PrenexKind kind = PrenexKind::Sigma;
  std::size_t level = 0;
  /// Lengths of the maximal same-kind quantifier runs, outermost first.
  std::vector<std::size_t> blocks;

  friend bool operator==(const PrenexShape&, const PrenexShape&) = default;
};

/// Absent unless `f` is a quantifier prefix over a quantifier-free matrix.
/// Quantifier-free formulas report Sigma, level 0.
std::optional<PrenexShape> classify_prenex(const Formula& f);
bool is_prenex(const Formula& f);

/// Strict classes; level 0 means quantifier-free.
bool in_sigma(const Formula& f, std::size_t k);
bool in_pi(const Formula& f, std::size_t k);

/// Cumulative classes: the strict class plus every lower Sigma and Pi level.
bool in_sigma_plus(const Formula& f, std::size_t k);
bool in_pi_plus(const Formula& f, std::size_t k);

bool in_plus(const Formula& f, PrenexKind kind, std::size_t k);

}  // namespace prenexify
