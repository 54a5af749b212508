#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmc/slie.hpp"

namespace lmc {

// n-simplices of the Maurer-Cartan simplicial set of A are extended elements
// of A tensor Omega_n, homogeneous of total degree 0, with zero curvature.
// They are carried around as bare Elements; validity is enforced at operation
// boundaries. Edges (n = 1) are stored on the normalized coordinate t_1, so
// the 0-form part at t_1 = 1 is the edge's start and at t_1 = 0 its end.

// Zero iff e is an MC n-simplex; the residual is curvature(a, e).
bool is_mc(const SLieAlgebra& a, const Element& e);
Element mc_residual(const SLieAlgebra& a, const Element& e);

// The stub of a simplex at vertex i: (del + d) h^i(e). Together with the
// vertex value it determines the simplex uniquely.
Element stub_of(const SLieAlgebra& a, const Element& e, int i);

// Membership test for stubs at vertex i: (del + d) nu = 0 and the vertex-i
// value of nu vanishes. Returns the reason a candidate fails, nullopt if it
// is a valid stub.
std::optional<std::string> stub_check(const SLieAlgebra& a, const Element& nu, int i);

// Reconstructs the unique MC n-simplex with vertex-i value mu and stub nu by
// the fixed-point recursion e <- (mu + nu) - sum_m 1/m! h^i{e,...,e}_m,
// stopping at the first repeated iterate. Preconditions: curv(mu) = 0 and nu
// passes stub_check.
Element reconstruct(const SLieAlgebra& a, int n, int i, const Element& mu, const Element& nu,
                    int* iterations = nullptr);

// Edge accessors. start = beta_0(0), end = beta_0(1) in the intrinsic edge
// clock (the clock runs opposite to the storage coordinate t_1, so start is
// the value at t_1 = 1). beta1_raw is the stored dt_1-coefficient; for
// degree-0 edges this equals the clock path of the dt-component read at
// t_1 = 1 - clock.
Element edge_start(const Element& e);
Element edge_end(const Element& e);
Element edge_beta0(const Element& e);      // 0-form part, storage coordinate
Element edge_beta1_raw(const Element& e);  // dt_1 coefficient as 0-forms
Element edge_reverse(const Element& e);    // substitutes t_1 := 1 - t_1

// The dt-component as a path in the edge clock: the dim-1 element whose value
// at clock s is beta_1(s), recovered from the raw coefficient with the
// per-symbol Koszul factor. MC edges satisfy d(beta_0)/ds = del^{beta_0(s)}
// applied to this path.
Element edge_beta1_path(const SLieAlgebra& a, const Element& e);

// True when every dt_1-coefficient is a constant polynomial.
bool is_rectified(const Element& e);
// The constant clock value of a rectified edge's dt-component as a dim-0
// element; integrate_edge(a, edge_start(e), that value) recovers e.
Element rectified_beta1(const SLieAlgebra& a, const Element& e);

// Solves the integral equation beta_0(clock) = start + integral of the
// twisted differential of rho1 along the path, by Picard iteration stopped at
// the first repeated iterate. rho1 is a dim-1 element whose components are
// 0-forms in the clock variable (t_1 means the clock here); the result is an
// MC edge in canonical storage with edge_start = start.
Element integrate_edge(const SLieAlgebra& a, const Element& start, const Element& rho1,
                       int* iterations = nullptr);

// Rewrites an MC edge whose dt-component has filtration weight >= k as an
// MC edge with the same endpoints and a constant dt-component of weight >= k,
// by the weight-by-weight triangle induction. Already-rectified edges return
// unchanged.
Element rectify(const SLieAlgebra& a, const Element& e, int k);

// Fills the inner horn on (e_left, e_right) at vertex 1: the triangle's
// t_0 = 0 face is e_left, its t_2 = 0 face is e_right, and the composite is
// the t_1 = 0 face, running from e_left's start to e_right's end.
struct ComposeResult {
  Element triangle;   // dim 2
  Element composite;  // dim 1
};
ComposeResult compose_edges(const SLieAlgebra& a, const Element& e_left, const Element& e_right);

// Iterated composition of a chain of MC edges; edges[n] (1-based) must have
// dt-component of weight >= n and consecutive endpoints must agree. The
// result connects edges.front()'s start to edges.back()'s end.
Element concatenate(const SLieAlgebra& a, const std::vector<Element>& edges);

// The base-point shift: sends an MC simplex s of the alpha-twisted algebra to
// alpha + s, an MC simplex of A. Commutes with faces, degeneracies, and
// pushforwards of twisted morphisms.
Element shift_base(const SLieAlgebra& a, const Element& alpha, const Element& s);

}  // namespace lmc
