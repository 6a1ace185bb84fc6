#pragma once

#include <optional>
#include <string>
#include <vector>

#include "k3c/exact.hpp"

namespace k3c {

// Integral lattice given by a symmetric Gram matrix in a fixed basis.
class Lattice {
 public:
  explicit Lattice(IntMatrix gram, std::vector<std::string> labels = {});

  std::size_t rank() const { return gram_.rows(); }
  IntMatrix const& gram() const { return gram_; }
  std::vector<std::string> const& labels() const { return labels_; }

  Integer pairing(IntVector const& v, IntVector const& w) const;
  Rational pairing(RatVector const& v, RatVector const& w) const;

  // The row vector v^T * gram, i.e. the pairings of v with each basis vector.
  IntVector dual_coordinates(IntVector const& v) const;

 private:
  IntMatrix gram_;
  std::vector<std::string> labels_;
};

using LatticeVector = IntVector;

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  friend bool operator==(Signature const&, Signature const&) = default;
};

// Rational subspace of L ⊗ Q given by linearly independent vectors.
class RationalSubspace {
 public:
  explicit RationalSubspace(std::vector<RatVector> basis);
  static RationalSubspace span(std::vector<IntVector> const& vectors);

  std::size_t dim() const { return basis_.size(); }
  std::size_t ambient_rank() const { return ambient_; }
  std::vector<RatVector> const& basis() const { return basis_; }

 private:
  std::vector<RatVector> basis_;
  std::size_t ambient_ = 0;
};

IntMatrix e8_negative_gram();
IntMatrix hyperbolic_plane_gram();

// E8(-1)^2 ⊕ U^3 with the three U blocks first (basis indices 0..5), then
// the two E8(-1) blocks (6..13, 14..21).
Lattice build_k3_lattice();

struct PolarizedLattice {
  Lattice lattice;       // Λ_2d with its own Gram matrix
  IntMatrix embedding;   // 22 x 21, columns = basis of Λ_2d in Λ_K3 coordinates
  LatticeVector lambda;  // e + d f in the first U block
  Lattice ambient;       // Λ_K3
};
PolarizedLattice build_polarized_lattice(int d);

Signature signature(Lattice const& l);
Integer lattice_determinant(Lattice const& l);

bool is_primitive(Lattice const& l, LatticeVector const& v);
Integer divisibility(Lattice const& l, LatticeVector const& v);

// Columns: a basis of the saturated sublattice {x in L : (x, s) = 0 for s in S}.
IntMatrix orthogonal_complement(Lattice const& l, RationalSubspace const& s);

// Restriction of the form to the sublattice spanned by the columns of basis.
Lattice sublattice(Lattice const& l, IntMatrix const& basis);

// Induced form on e⊥/⟨e⟩ for a primitive isotropic e.
class IsotropicQuotient {
 public:
  Lattice const& quotient() const { return quotient_; }
  // Columns: e followed by lifts of the quotient basis; a basis of e⊥.
  IntMatrix const& adapted_basis() const { return adapted_; }
  LatticeVector const& isotropic_vector() const { return e_; }

  // Quotient coordinates of x ∈ e⊥ ⊗ Q; throws if x is not orthogonal to e.
  RatVector project(RatVector const& x) const;
  // A lift of quotient coordinates back into e⊥.
  RatVector lift(RatVector const& q) const;

 private:
  friend IsotropicQuotient quotient_by_isotropic(Lattice const& l, LatticeVector const& e);
  IsotropicQuotient(Lattice quotient, IntMatrix adapted, LatticeVector e, Lattice ambient)
      : quotient_(std::move(quotient)), adapted_(std::move(adapted)), e_(std::move(e)), ambient_(std::move(ambient)) {}

  Lattice quotient_;
  IntMatrix adapted_;
  LatticeVector e_;
  Lattice ambient_;
};

IsotropicQuotient quotient_by_isotropic(Lattice const& l, LatticeVector const& e);

enum class StratumKind { Line, Plane };
std::string to_string(StratumKind k);

// Orbit invariants of a primitive isotropic vector: divisibility and the
// class of e/div(e) in the discriminant group L^∨/L.
struct BoundaryInvariants {
  Integer divisibility;
  RatVector discriminant_class;  // coordinates in [0, 1)
  Integer class_order;
  Rational class_norm_mod_2;     // q(e/div) reduced to [0, 2)
};

BoundaryInvariants boundary_invariants(Lattice const& l, LatticeVector const& e);

struct BoundaryStratumDescriptor {
  StratumKind kind = StratumKind::Line;
  IntMatrix generators;  // saturated integral basis, as columns
  RatMatrix change_of_basis;  // input basis = generators * change_of_basis
  std::optional<Lattice> quotient_lattice;
  std::optional<Signature> quotient_signature;
  std::optional<BoundaryInvariants> invariants;
};

BoundaryStratumDescriptor classify_boundary(Lattice const& l, RationalSubspace const& s);

}  // namespace k3c
