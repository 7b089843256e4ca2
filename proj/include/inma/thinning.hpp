#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "inma/distributions.hpp"
#include "inma/rng.hpp"

namespace inma {

/// Coefficient array of a moving-average order box. Entry (i, j) is the
/// thinning probability applied to the innovation at offset (i, j),
/// 0 <= i <= q1, 0 <= j <= q2.
///
/// Components of thinning-related vectors are stored flat with index
/// j * (q1 + 1) + i, i.e. the first offset varies fastest. Construction
/// input is row-major (entry (i, j) at i * (q2 + 1) + j) to match the
/// config file layout.
class BetaMatrix {
public:
    BetaMatrix(int q1, int q2, const std::vector<double>& entries_row_major);

    static BetaMatrix from_rows(const std::vector<std::vector<double>>& rows);

    int q1() const { return q1_; }
    int q2() const { return q2_; }
    int component_count() const { return (q1_ + 1) * (q2_ + 1); }

    /// Flat component index of offset (i, j); first offset fastest.
    int flat_index(int i, int j) const { return j * (q1_ + 1) + i; }

    double at(int i, int j) const;

    /// Entry value, or 0 when (i, j) falls outside the order box. Offsets
    /// outside the box carry no thinning, so their coefficient is zero.
    double at_or_zero(int i, int j) const;

    double beta_dot() const { return beta_dot_; }
    double sum_of_squares() const;

    std::span<const double> flat() const { return flat_; }

private:
    int q1_;
    int q2_;
    std::vector<double> flat_;  // index j * (q1 + 1) + i
    double beta_dot_;
};

/// Joint law of one counting vector: how the per-individual Bernoulli
/// outcomes across the order box relate to each other.
enum class CrossDependence {
    kIndependence,  // components mutually independent
    kSpread,        // multinomial: at most one component is 1 (needs beta_dot <= 1)
};

const char* cross_dependence_name(CrossDependence model);

/// All thinnings applied to a single innovation, plus the innovation value
/// they were drawn from. Component (i, j) sits at flat index j*(q1+1)+i.
struct ThinningVector {
    std::uint64_t eps = 0;
    std::vector<std::uint64_t> y;
};

/// Which sampling route realizes a thinning vector. Both produce the same
/// joint law; kPerIndividual materializes every counting vector and is kept
/// for cross-checking the compound route.
enum class ThinningPath {
    kCompound,       // Independence: per-component binomials; Spread: multinomial
    kPerIndividual,  // sum of eps explicit counting vectors
};

/// One counting-vector draw: out[c] in {0,1}, marginally Bernoulli(beta[c]).
void sample_counting_vector(const BetaMatrix& beta, CrossDependence model,
                            rng::SiteStream& stream, std::span<std::uint8_t> out);

std::vector<std::uint8_t> sample_counting_vector(const BetaMatrix& beta, CrossDependence model,
                                                 rng::SiteStream& stream);

/// Sum of eps i.i.d. counting vectors; marginally y[c] | eps ~ Bin(eps, beta[c]).
ThinningVector sample_thinning_vector(const BetaMatrix& beta, CrossDependence model,
                                      std::uint64_t eps, rng::SiteStream& stream,
                                      ThinningPath path = ThinningPath::kCompound);

/// Allocation-free variant for the simulator hot loop; out must hold
/// component_count() values and is fully overwritten.
void sample_thinning_vector_into(const BetaMatrix& beta, CrossDependence model,
                                 std::uint64_t eps, rng::SiteStream& stream, ThinningPath path,
                                 std::span<std::uint64_t> out);

/// P(Z_a = Z_b = 1) for one counting vector: beta[a] when the indices
/// coincide; beta[a] * beta[b] under Independence; 0 under Spread.
double joint_success_prob(const BetaMatrix& beta, CrossDependence model,
                          std::pair<int, int> a, std::pair<int, int> b);

/// Joint pgf of one counting vector at u (flat component order), u in [0,1].
double pgf_z(const BetaMatrix& beta, CrossDependence model, std::span<const double> u);

/// Joint pgf of a thinning vector: innovation pgf composed with pgf_z.
double pgf_y(const InnovationSpec& spec, const BetaMatrix& beta, CrossDependence model,
             std::span<const double> u);

}  // namespace inma
