#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmc/linalg.hpp"
#include "lmc/mc.hpp"
#include "lmc/slie.hpp"

namespace lmc {

// ---------------------------------------------------------------------------
// Filtered quasi-isomorphism check
// ---------------------------------------------------------------------------

struct QisoFailure {
  int weight = 0;  // graded layer where the induced map fails
  int degree = 0;  // cohomological degree of the failure
};

struct QisoReport {
  std::vector<QisoFailure> failures;
  bool pass() const { return failures.empty(); }
};

// Checks that the linear Taylor coefficient induces isomorphisms on the
// cohomology of every graded layer 1..N in every degree where either side
// is nonzero. Reports all failing (weight, degree) pairs.
QisoReport check_filtered_qiso(const InftyMorphism& u);

// ---------------------------------------------------------------------------
// Refutations and certificates
// ---------------------------------------------------------------------------

// A graded cohomology class witnessing that a layer problem has no solution,
// refuting the quasi-isomorphism hypothesis.
struct Refutation {
  int weight = 0;
  int degree = 0;
  bool in_target = false;  // class lives in the target layer when true
  Element cls;             // dim-0 representative, homogeneous of that weight
  std::string detail;
};

// One layer of the preimage tower. Witnesses are stored exactly as chosen so
// the layer equations can be re-checked without re-running the construction.
struct PreimageLayer {
  int layer = 0;       // n, counted from 0
  Element alpha_n;     // source tower point entering the layer
  Element defect;      // target: edge end minus the pushforward of alpha_n
  Element gamma;       // source correction, degree 0, weight >= n+1
  Element xi;          // target edge correction, degree -1, weight >= n+1
  Element sigma;       // source curvature correction, degree 0, weight >= n+2
  Element beta1;       // target: constant dt-part of the edge after the layer
  int picard_iterations = 0;
};

// One layer of the connecting tower.
struct ConnectLayer {
  int layer = 0;       // n, counted from 1
  Element alpha_n;     // source base point entering the layer
  Element beta1;       // target: constant dt-part of the rectified layer edge
  Element rho1;        // source edge direction, degree -1, weight >= n
  Element gamma_t;     // target homotopy witness, degree -2, weight >= n
  Element rho_edge;    // source edge from alpha_n to the next base point
  int picard_iterations = 0;
  int horn_iterations = 0;
};

// Self-describing witness for a successful transfer run.
//   kind "preimage": alpha is the constructed source Maurer-Cartan element,
//     alpha_prime the target input it lifts, and edge the target edge from
//     alpha_prime to the pushforward of alpha.
//   kind "connect": alpha and alpha_prime are the source endpoints and edge
//     is the constructed source edge from alpha to alpha_prime.
struct TransferCertificate {
  std::string kind;
  Element alpha;
  Element alpha_prime;
  Element edge;
  std::vector<PreimageLayer> preimage_layers;
  std::vector<ConnectLayer> connect_layers;
};

// Re-checks a certificate from its stored data alone: Maurer-Cartan and
// endpoint facts, filtration memberships, the graded layer equations, and
// the chaining between consecutive layers. Returns all violations found;
// empty means the certificate is valid for u.
std::vector<std::string> validate_certificate(const InftyMorphism& u,
                                              const TransferCertificate& c);

struct TransferResult {
  std::optional<TransferCertificate> certificate;  // set on success
  std::optional<Refutation> refutation;            // set when a layer is unsolvable
  bool ok() const { return certificate.has_value(); }
};

// Surjectivity transfer: constructs a source Maurer-Cartan element alpha and
// a target edge connecting alpha_tilde to the pushforward of alpha, or a
// refuting graded class when some layer problem is unsolvable.
// pre: curv(alpha_tilde) == 0 (PreconditionError); algebras share the
// truncation (InputError).
TransferResult mc_preimage(const InftyMorphism& u, const Element& alpha_tilde);

// Injectivity transfer: given source Maurer-Cartan elements alpha, alpha_prime
// and a target edge beta_tilde connecting their pushforwards, constructs a
// source edge from alpha to alpha_prime, or a refuting graded class.
// pre: both points Maurer-Cartan (PreconditionError); beta_tilde a
// Maurer-Cartan edge (PreconditionError) whose endpoints are the two
// pushforwards (InputError).
TransferResult transfer_connect(const InftyMorphism& u, const Element& alpha,
                                const Element& alpha_prime, const Element& beta_tilde);

// ---------------------------------------------------------------------------
// Moore complex of a levelwise-finite simplicial vector space
// ---------------------------------------------------------------------------

struct SimplicialVectorSpace {
  std::vector<int> dims;                        // dims[n] for n = 0..levels
  std::vector<std::vector<Matrix>> face;        // face[n][j] : V_n -> V_{n-1}, n >= 1
  std::vector<std::vector<Matrix>> degeneracy;  // degeneracy[n][j] : V_n -> V_{n+1}
  int levels() const { return static_cast<int>(dims.size()) - 1; }
};

// Shape and simplicial-identity violations, as readable strings; empty means
// the data is a simplicial vector space up to the stored level.
std::vector<std::string> check_simplicial(const SimplicialVectorSpace& v);

struct MooreHomology {
  int dimension = 0;
  std::vector<Vec> basis;  // representing cycles in V_i coordinates
};

// H_i of the unnormalized chain complex, computed from levels 0..cutoff.
// pre: cutoff >= i+1 and cutoff <= levels (InputError); the simplicial
// identities hold (InputError).
MooreHomology moore_homology(const SimplicialVectorSpace& v, int i, int cutoff);

// ---------------------------------------------------------------------------
// Homotopy groups in the abelian case
// ---------------------------------------------------------------------------

// The simplicial vector space of degree-0 cocycles of the form-extended
// algebra over each simplex, in levels 0..levels, for an abelian algebra.
// pre: the bracket table is empty (PreconditionError).
SimplicialVectorSpace abelian_mc_simplicial(const SLieAlgebra& a, int levels);

// dim H^{-i} of the underlying cochain complex; for an abelian algebra this
// is the rank of the i-th homotopy group of the Maurer-Cartan space.
// pre: the bracket table is empty (PreconditionError).
int abelian_homotopy(const SLieAlgebra& a, int i);

}  // namespace lmc
