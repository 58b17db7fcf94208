#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace csflock::stochastic {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Support = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Row-sum tolerance for matrices built directly.
inline constexpr double kRowSumTolerance = 1e-12;
/// Row-sum tolerance for accumulated products.
inline constexpr double kProductRowSumTolerance = 1e-10;
/// Entries above this count as positive when no structural support is known.
inline constexpr double kPositivityThreshold = 1e-15;

/// Square nonnegative matrix with unit row sums.
///
/// Optionally carries a structural support pattern (which entries are
/// positive by construction). When present, structural questions such as
/// "is there a strictly positive column" are answered from the pattern
/// instead of from floating-point magnitudes.
class StochasticMatrix {
public:
    /// Throws InvariantError on a negative entry or a row sum off by more
    /// than `tolerance`, DimensionError when not square.
    explicit StochasticMatrix(Matrix entries, double tolerance = kRowSumTolerance);
    StochasticMatrix(Matrix entries, Support support, double tolerance = kRowSumTolerance);

    static StochasticMatrix identity(Eigen::Index n);

    Eigen::Index size() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
    const std::optional<Support>& support() const { return support_; }

    /// Support pattern, structural if known, otherwise thresholded.
    Support positive_pattern() const;

private:
    Matrix entries_;
    std::optional<Support> support_;
};

/// later * earlier; support propagates as a boolean product when both
/// operands carry one.
StochasticMatrix multiply(const StochasticMatrix& later, const StochasticMatrix& earlier);

/// Row vector of column minima.
RowVector floor_vector(const StochasticMatrix& f);

/// F - 1 * floor(F). Entries are nonnegative.
Matrix bracket(const StochasticMatrix& f);

/// Maximum absolute row sum.
double inf_norm(const Matrix& m);

struct ProductTrace {
    StochasticMatrix product;
    /// floor of F_k ... F_1 for k = 1..len; elementwise nondecreasing.
    std::vector<RowVector> floor_trace;
};

/// Accumulates F_t ... F_2 F_1 with seq[0] = F_1 acting first.
/// Throws DimensionError on mixed sizes or InvariantError on an empty list.
ProductTrace product_floor_limit(std::span<const StochasticMatrix> seq);

/// ||[F]||_inf < 1, i.e. F has a strictly positive column.
bool is_strongly_rooted(const StochasticMatrix& f);

}  // namespace csflock::stochastic
