#pragma once

#include "jetvar/expression.hpp"
#include "jetvar/jet.hpp"

#include <optional>

namespace jetvar {

enum class Stage { raw_with_v, specialized, reduced };

const char* stage_name(Stage s);

// Conserved vector (C0, C1) of D_t C0 + D_x C1 = 0 with its provenance.
struct ConservedVector {
  Expression c0;
  Expression c1;
  EvolutionEquation equation;
  Generator generator;
  Stage stage = Stage::raw_with_v;
  bool verified = false;
  // The equation is not self-adjoint, so v = u is not justified.
  bool unverified_premise = false;
  // reduce_trivial hit its iteration cap.
  bool capped = false;
};

// Formal Lagrangian vF with
//   C0 = tau L + W dL/du_t
//   C1 = xi L + sum_k D_x^k(W) sum_j (-D_x)^j dL/du_{x^(k+j+1)}
// Throws UnsupportedForm for equations of order above four.
ConservedVector conserved_vector(const EvolutionEquation& eq, const Generator& g);

// v -> u on both components. Flags unverified_premise when the equation fails the
// self-adjointness test.
ConservedVector specialize_v(const ConservedVector& cv);

// Moves x-exact parts of C0 into the flux: C0 = A + D_x B gives (A, C1 + D_t B). Also
// eliminates t-derivatives on solutions and drops additive constants. Re-verifies.
ConservedVector reduce_trivial(const ConservedVector& cv, int max_iterations = 64);

// On-shell D_t C0 + D_x C1.
Expression divergence_residual(const Expression& c0, const Expression& c1,
                               const EvolutionEquation& eq);

// Sets cv.verified. Throws UnsupportedForm if v-atoms are present.
bool verify_divergence(ConservedVector& cv);

struct Equivalence {
  bool equivalent = false;
  std::optional<Coefficient> scale;  // reduced C0 of the second = scale * that of the first
};

Equivalence equivalent_up_to_trivial(const ConservedVector& first, const ConservedVector& second);

}  // namespace jetvar
