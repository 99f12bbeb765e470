#include "prenexify/hierarchy.hpp"

namespace prenexify {

std::optional<PrenexShape> classify_prenex(const Formula& f) {
  PrenexShape shape;
  const Formula* cur = &f;
  std::optional<Quantifier> last;
  while (cur->is_quantifier()) {
    Quantifier q = cur->quantifier();
    if (!last) {
      shape.kind = q == Quantifier::Exists ? PrenexKind::Sigma : PrenexKind::Pi;
    }
    if (last == q) {
      ++shape.blocks.back();
    } else {
      shape.blocks.push_back(1);
      last = q;
    }
    cur = &cur->body();
  }
  if (!cur->quantifier_free()) return std::nullopt;
  shape.level = shape.blocks.size();
  return shape;
}

bool is_prenex(const Formula& f) {
  const Formula* cur = &f;
  while (cur->is_quantifier()) cur = &cur->body();
  return cur->quantifier_free();
}

bool in_sigma(const Formula& f, std::size_t k) {
  auto s = classify_prenex(f);
  if (!s) return false;
  if (k == 0) return s->level == 0;
  return s->level == k && s->kind == PrenexKind::Sigma;
}

bool in_pi(const Formula& f, std::size_t k) {
  auto s = classify_prenex(f);
  if (!s) return false;
  if (k == 0) return s->level == 0;
  return s->level == k && s->kind == PrenexKind::Pi;
}

bool in_plus(const Formula& f, PrenexKind kind, std::size_t k) {
  auto s = classify_prenex(f);
  if (!s) return false;
  if (s->level < k) return true;
  if (s->level > k) return false;
  return k == 0 || s->kind == kind;
}

bool in_sigma_plus(const Formula& f, std::size_t k) { return in_plus(f, PrenexKind::Sigma, k); }
bool in_pi_plus(const Formula& f, std::size_t k) { return in_plus(f, PrenexKind::Pi, k); }

}  // namespace prenexify
