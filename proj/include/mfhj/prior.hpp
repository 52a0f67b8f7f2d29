#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mfhj {

struct Atom {
  double value;
  double weight;
};

// Single-coordinate reference law: either finitely many atoms or the standard
// Gaussian. Immutable after construction.
class Prior {
 public:
  enum class Kind { atomic, gaussian };

  // Weights must be strictly positive and sum to 1 within 1e-12.
  static Prior atomic(std::vector<Atom> atoms, std::string name = "atomic");
  static Prior gaussian();
  // 1/2 delta_{-1} + 1/2 delta_{+1}
  static Prior uniform_pm1();
  // Same law as uniform_pm1, under the inference-chapter name.
  static Prior rademacher();
  // p delta_{+1} + (1-p) delta_{-1}
  static Prior bernoulli_pm1(double p);
  // (1-p) delta_0 + p/2 delta_{1/sqrt p} + p/2 delta_{-1/sqrt p}
  static Prior sparse(double p);
  // Parses "gaussian", "rademacher", "uniform_pm1", "bernoulli(p)", "sparse(p)".
  static Prior parse(std::string_view spec);

  Kind kind() const { return kind_; }
  bool is_atomic() const { return kind_ == Kind::atomic; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::string& name() const { return name_; }

  double mean() const;
  double second_moment() const;
  // a := max |value|^2 over the support; +inf for the Gaussian.
  double support_bound() const;

 private:
  Prior(Kind kind, std::vector<Atom> atoms, std::string name)
      : kind_(kind), atoms_(std::move(atoms)), name_(std::move(name)) {}

  Kind kind_;
  std::vector<Atom> atoms_;
  std::string name_;
};

}  // namespace mfhj
