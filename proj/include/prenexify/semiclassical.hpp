#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prenexify/formula.hpp"

namespace prenexify {

enum class ClassKind : std::uint8_t { J, R };

/// Which generation clause put a formula into its class.
enum class Clause : std::uint8_t {
  QuantifierFree,  // level 0
  Lower,           // member of D at the level below
  And,
  Or,
  Imp,
  Exists,
  Forall,
};

const char* clause_name(Clause c);

/// Derivation of a membership fact. Premises follow the formula: Lower has
/// one premise on the same formula, binary clauses have (left, right),
/// quantifier clauses have the body.
struct Witness {
  ClassKind kind = ClassKind::J;
  std::size_t k = 0;
  Clause clause = Clause::QuantifierFree;
  std::vector<Witness> premises;

  std::size_t size() const;
};

nlohmann::json to_json(const Witness& w);

/// J/R bits for every subformula occurrence of one formula at a fixed degree
/// n, for levels 0..k_max.
class MembershipTable {
 public:
  MembershipTable(const Formula& f, std::size_t n, std::size_t k_max);

  std::size_t degree() const { return n_; }
  std::size_t k_max() const { return k_max_; }
  const Formula& formula() const { return f_; }

  /// Levels above k_max answer false.
  bool J(std::size_t k) const { return at(root(), ClassKind::J, k); }
  bool R(std::size_t k) const { return at(root(), ClassKind::R, k); }
  bool D(std::size_t k) const { return J(k) || R(k); }

  std::optional<Witness> witness(ClassKind kind, std::size_t k) const;

  /// Human-readable reason why the root is not in the class.
  std::string explain_failure(ClassKind kind, std::size_t k) const;

 private:
  struct Node {
    const Formula* f;
    int left = -1;   // also the quantifier body
    int right = -1;
    std::vector<bool> j;
    std::vector<bool> r;
  };

  int build(const Formula& f);
  void fill(Node& node);
  int root() const { return static_cast<int>(nodes_.size()) - 1; }
  bool at(int node, ClassKind kind, std::size_t k) const;
  bool d(int node, std::size_t k) const {
    return at(node, ClassKind::J, k) || at(node, ClassKind::R, k);
  }
  bool clause_holds(int node, ClassKind kind, std::size_t k) const;
  Witness make_witness(int node, ClassKind kind, std::size_t k) const;
  Witness make_d_witness(int node, std::size_t k) const;

  Formula f_;
  std::size_t n_;
  std::size_t k_max_;
  std::vector<Node> nodes_;  // postorder, root last
};

bool in_J(const Formula& f, std::size_t k, std::size_t n);
bool in_R(const Formula& f, std::size_t k, std::size_t n);
bool in_D(const Formula& f, std::size_t k, std::size_t n);
bool in_class(const Formula& f, ClassKind kind, std::size_t k, std::size_t n);

struct ClassVerdict {
  Formula formula;
  std::size_t n = 0;
  std::size_t k = 0;
  bool in_J = false;
  bool in_R = false;
  std::optional<Witness> witness_J;
  std::optional<Witness> witness_R;

  bool in_D() const { return in_J || in_R; }
};

ClassVerdict classify(const Formula& f, std::size_t k, std::size_t n);

struct MinLevels {
  std::optional<std::size_t> k_J;
  std::optional<std::size_t> k_R;
  std::size_t k_max = 0;
};

/// Least k <= k_max with membership. Default k_max is n + size(f) + 1.
/// An absent level only means "absent up to k_max".
MinLevels min_levels(const Formula& f, std::size_t n, std::optional<std::size_t> k_max = {});

/// Cumulative classes of the fully classical-at-level-k setting.
bool in_E_plus(const Formula& f, std::size_t k);
bool in_U_plus(const Formula& f, std::size_t k);

/// Re-checks a derivation clause by clause; independent of MembershipTable.
bool replay_witness(const Formula& f, const Witness& w, std::size_t n);

std::string explain_non_membership(const Formula& f, ClassKind kind, std::size_t k,
                                   std::size_t n);

}  // namespace prenexify
