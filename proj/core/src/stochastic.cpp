#include "csflock/stochastic.hpp"

#include <cmath>
#include <sstream>

#include "csflock/errors.hpp"

namespace csflock::stochastic {

namespace {

void validate(const Matrix& m, double tolerance) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << "stochastic matrix must be square, got " << m.rows() << "x" << m.cols();
        throw DimensionError(msg.str());
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double x = m(i, j);
            if (!std::isfinite(x) || x < 0.0) {
                std::ostringstream msg;
                msg << "entry (" << i + 1 << ", " << j + 1 << ") = " << x
                    << " is not a nonnegative finite number";
                throw InvariantError(msg.str());
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > tolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "row " << i + 1 << " sums to " << sum;
            throw InvariantError(msg.str());
        }
    }
}

}  // namespace

StochasticMatrix::StochasticMatrix(Matrix entries, double tolerance) : entries_(std::move(entries)) {
    validate(entries_, tolerance);
}

StochasticMatrix::StochasticMatrix(Matrix entries, Support support, double tolerance)
    : entries_(std::move(entries)), support_(std::move(support)) {
    validate(entries_, tolerance);
    if (support_->rows() != entries_.rows() || support_->cols() != entries_.cols())
        throw DimensionError("support pattern shape differs from the matrix");
}

StochasticMatrix StochasticMatrix::identity(Eigen::Index n) {
    return StochasticMatrix(Matrix::Identity(n, n), Support(Matrix::Identity(n, n).cast<bool>()));
}

Support StochasticMatrix::positive_pattern() const {
    if (support_) return *support_;
    return (entries_.array() > kPositivityThreshold).matrix();
}

StochasticMatrix multiply(const StochasticMatrix& later, const StochasticMatrix& earlier) {
    if (later.size() != earlier.size()) {
        std::ostringstream msg;
        msg << "cannot multiply stochastic matrices of size " << later.size() << " and "
            << earlier.size();
        throw DimensionError(msg.str());
    }
    Matrix product = later.entries() * earlier.entries();
    if (later.support() && earlier.support()) {
        const Matrix a = later.support()->cast<double>();
        const Matrix b = earlier.support()->cast<double>();
        Support s = ((a * b).array() > 0.5).matrix();
        return StochasticMatrix(std::move(product), std::move(s), kProductRowSumTolerance);
    }
    return StochasticMatrix(std::move(product), kProductRowSumTolerance);
}

RowVector floor_vector(const StochasticMatrix& f) { return f.entries().colwise().minCoeff(); }

Matrix bracket(const StochasticMatrix& f) {
    const RowVector fl = floor_vector(f);
    return f.entries().rowwise() - fl;
}

double inf_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

ProductTrace product_floor_limit(std::span<const StochasticMatrix> seq) {
    if (seq.empty()) throw InvariantError("product of an empty sequence");
    ProductTrace out{seq.front(), {}};
    out.floor_trace.reserve(seq.size());
    out.floor_trace.push_back(floor_vector(out.product));
    for (std::size_t k = 1; k < seq.size(); ++k) {
        out.product = multiply(seq[k], out.product);
        out.floor_trace.push_back(floor_vector(out.product));
    }
    return out;
}

bool is_strongly_rooted(const StochasticMatrix& f) {
    const Support s = f.positive_pattern();
    return (s.colwise().all()).any();
}

}  // namespace csflock::stochastic
