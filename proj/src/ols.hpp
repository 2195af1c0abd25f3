#pragma once

#include <Eigen/Dense>
#include <span>

#include "nledge/types.hpp"

namespace nledge::detail {

// Ordinary-least-squares residuals of target on {intercept, predictors...}.
// Throws degenerate_input_error when the design matrix is rank deficient.
inline Sample ols_residuals(const Sample& target, std::span<const Sample> predictors) {
    const auto n = target.size();
    const auto k = predictors.size();
    for (const Sample& p : predictors) {
        if (p.size() != n) throw invalid_input_error("residualize: predictor length mismatch");
    }
    if (n < k + 2) throw sample_too_small_error("residualize requires n >= #predictors + 2");

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k + 1));
    design.col(0).setOnes();
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = predictors[j][i];
    }
    Eigen::VectorXd yv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) yv(static_cast<Eigen::Index>(i)) = target[i];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(k + 1))
        throw degenerate_input_error("residualize: collinear design matrix");

    const Eigen::VectorXd fitted = design * qr.solve(yv);
    Sample out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = target[i] - fitted(static_cast<Eigen::Index>(i));
    return out;
}

}  // namespace nledge::detail
