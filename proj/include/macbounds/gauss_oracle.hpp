#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "macbounds/gauss_region.hpp"
#include "macbounds/region_geom.hpp"

namespace macbounds {

/// Joint Gaussian covariance with named variables, power units.
struct CovMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd sigma;

    Eigen::Index index_of(const std::string& label) const;
};

/// Covariance of (S, U1, X1, X2, U2, Y) implied by the coding construction:
/// X1 = U1 + X1_tilde, X2 correlated with U1 and S through sigma12 and
/// sigma2s, U2 = V2 + alpha*(1 + sigma2s/Q)*S, Y = X1 + X2 + S + Z.
/// Ratio terms with a zero denominator (theta_bar = 0 or Q = 0) are 0.
CovMatrix assemble_inner_covariance(const ChannelParams& ch, const InnerParams& p);

/// Covariance of (S, X1, X2, Y) with E[X1 S] = 0, E[X1 X2] = rho12*sqrt(P1 P2)
/// and E[X2 S] = rho2s*sqrt(P2 Q).
CovMatrix assemble_outer_covariance(const ChannelParams& ch, const OuterParams& p);

/// Conditional mutual information I(A; B | C) in bits via
/// log det Sigma_{A,C} + log det Sigma_{B,C} - log det Sigma_C
/// - log det Sigma_{A,B,C}, with det Sigma_{} := 1. Determinants come from
/// eigenvalues floored at 1e-12 times the largest diagonal entry of the
/// full matrix, so zero-variance variables drop out of the ratios.
double gaussian_cmi(const CovMatrix& cov, const std::vector<std::string>& a,
                    const std::vector<std::string>& b, const std::vector<std::string>& c);

struct OracleInner {
    RateConstraints rates;
    /// I(U2; Y | U1, X1) - I(U2; S | U1), the binning feasibility value.
    double feasibility = 0.0;
};

/// Rate expressions of the achievable region evaluated as conditional
/// mutual informations on the assembled inner covariance.
OracleInner oracle_inner(const ChannelParams& ch, const InnerParams& p);

/// I(X1; Y | S, X2) and I(X1, X2; Y | S) - I(X1; S | Y) on the outer
/// covariance.
RateConstraints oracle_outer(const ChannelParams& ch, const OuterParams& p);

}  // namespace macbounds
