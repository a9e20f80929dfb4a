#include "macbounds/gauss_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace macbounds {

namespace {

constexpr double kPsdTol = -1e-10;
constexpr double kEigFloorRel = 1e-12;

Eigen::MatrixXd from_loadings(const Eigen::MatrixXd& load, const Eigen::VectorXd& variances) {
    return load * variances.asDiagonal() * load.transpose();
}

void check_psd(const CovMatrix& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.sigma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdTol)
        throw std::runtime_error("assembled covariance is not positive semi-definite");
}

/// log2 det of the principal submatrix on idx, eigenvalues floored at
/// floor_abs. Empty index set contributes log2(1) = 0.
double floored_log2_det(const Eigen::MatrixXd& sigma, const std::vector<Eigen::Index>& idx,
                        double floor_abs) {
    if (idx.empty()) return 0.0;
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = sigma(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    double ld = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        ld += std::log2(std::max(es.eigenvalues()[k], floor_abs));
    return ld;
}

}  // namespace

Eigen::Index CovMatrix::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<Eigen::Index>(i);
    throw std::invalid_argument("unknown covariance label: " + label);
}

CovMatrix assemble_inner_covariance(const ChannelParams& ch, const InnerParams& p) {
    validate(ch);
    validate(p);

    const double theta_bar = 1.0 - p.theta;
    const double var_u1 = theta_bar * ch.p1;
    const double rho12p = std::sqrt(std::max(0.0, 1.0 - p.xi - p.rho * p.rho));
    // sigma12 / Var(U1) and sigma2s / Q, with 0 for zero-variance parents.
    const double cu = var_u1 > 0.0 ? rho12p * std::sqrt(ch.p2 / var_u1) : 0.0;
    const double cs = ch.q > 0.0 ? p.rho * std::sqrt(ch.p2 / ch.q) : 0.0;

    // Independent components: S, U1, X1_tilde, V2, Z.
    Eigen::VectorXd variances(5);
    variances << ch.q, var_u1, p.theta * ch.p1, ch.p2 * p.xi, ch.n0;
    Eigen::MatrixXd load(6, 5);
    load.setZero();
    // S
    load(0, 0) = 1.0;
    // U1
    load(1, 1) = 1.0;
    // X1 = U1 + X1_tilde
    load(2, 1) = 1.0;
    load(2, 2) = 1.0;
    // X2 = cu*U1 + cs*S + V2
    load(3, 0) = cs;
    load(3, 1) = cu;
    load(3, 3) = 1.0;
    // U2 = V2 + alpha*(1 + cs)*S
    load(4, 0) = p.alpha * (1.0 + cs);
    load(4, 3) = 1.0;
    // Y = X1 + X2 + S + Z
    load(5, 0) = 1.0 + cs;
    load(5, 1) = 1.0 + cu;
    load(5, 2) = 1.0;
    load(5, 3) = 1.0;
    load(5, 4) = 1.0;

    CovMatrix cov;
    cov.labels = {"S", "U1", "X1", "X2", "U2", "Y"};
    cov.sigma = from_loadings(load, variances);
    check_psd(cov);
    return cov;
}

CovMatrix assemble_outer_covariance(const ChannelParams& ch, const OuterParams& p) {
    validate(ch);
    validate(p);

    const double sigma12 = p.rho12 * std::sqrt(ch.p1 * ch.p2);
    const double sigma2s = p.rho2s * std::sqrt(ch.p2 * ch.q);
    const double c_s = ch.q > 0.0 ? sigma2s / ch.q : 0.0;
    const double c_x1 = ch.p1 > 0.0 ? sigma12 / ch.p1 : 0.0;
    const double var_w =
        std::max(0.0, ch.p2 * (1.0 - p.rho12 * p.rho12 - p.rho2s * p.rho2s));

    // Independent components: S, X1, W (residual of X2), Z.
    Eigen::VectorXd variances(4);
    variances << ch.q, ch.p1, var_w, ch.n0;
    Eigen::MatrixXd load(4, 4);
    load.setZero();
    // S
    load(0, 0) = 1.0;
    // X1
    load(1, 1) = 1.0;
    // X2 = c_s*S + c_x1*X1 + W
    load(2, 0) = c_s;
    load(2, 1) = c_x1;
    load(2, 2) = 1.0;
    // Y = X1 + X2 + S + Z
    load(3, 0) = 1.0 + c_s;
    load(3, 1) = 1.0 + c_x1;
    load(3, 2) = 1.0;
    load(3, 3) = 1.0;

    CovMatrix cov;
    cov.labels = {"S", "X1", "X2", "Y"};
    cov.sigma = from_loadings(load, variances);
    check_psd(cov);
    return cov;
}

double gaussian_cmi(const CovMatrix& cov, const std::vector<std::string>& a,
                    const std::vector<std::string>& b, const std::vector<std::string>& c) {
    if (a.empty() || b.empty()) throw std::invalid_argument("gaussian_cmi: A and B must be non-empty");

    std::vector<Eigen::Index> ia, ib, ic;
    for (const auto& l : a) ia.push_back(cov.index_of(l));
    for (const auto& l : b) ib.push_back(cov.index_of(l));
    for (const auto& l : c) ic.push_back(cov.index_of(l));
    std::vector<Eigen::Index> all = ia;
    all.insert(all.end(), ib.begin(), ib.end());
    all.insert(all.end(), ic.begin(), ic.end());
    std::vector<Eigen::Index> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("gaussian_cmi: label sets must be disjoint");

    const double floor_abs =
        std::max(1e-300, kEigFloorRel * cov.sigma.diagonal().maxCoeff());
    auto with = [](std::vector<Eigen::Index> lhs, const std::vector<Eigen::Index>& rhs) {
        lhs.insert(lhs.end(), rhs.begin(), rhs.end());
        return lhs;
    };
    const double val = 0.5 * (floored_log2_det(cov.sigma, with(ia, ic), floor_abs) +
                              floored_log2_det(cov.sigma, with(ib, ic), floor_abs) -
                              floored_log2_det(cov.sigma, ic, floor_abs) -
                              floored_log2_det(cov.sigma, with(with(ia, ib), ic), floor_abs));
    return std::max(val, 0.0);
}

OracleInner oracle_inner(const ChannelParams& ch, const InnerParams& p) {
    const CovMatrix cov = assemble_inner_covariance(ch, p);
    const double penalty = gaussian_cmi(cov, {"U2"}, {"S"}, {"U1"});
    OracleInner out;
    out.rates.r1_a = gaussian_cmi(cov, {"X1"}, {"Y"}, {"U1", "U2"});
    out.rates.r1_b = gaussian_cmi(cov, {"X1", "U2"}, {"Y"}, {"U1"}) - penalty;
    out.rates.sum_c = gaussian_cmi(cov, {"X1", "U1", "U2"}, {"Y"}, {}) - penalty;
    out.feasibility = gaussian_cmi(cov, {"U2"}, {"Y"}, {"U1", "X1"}) - penalty;
    return out;
}

RateConstraints oracle_outer(const ChannelParams& ch, const OuterParams& p) {
    const CovMatrix cov = assemble_outer_covariance(ch, p);
    RateConstraints out;
    out.r1_a = gaussian_cmi(cov, {"X1"}, {"Y"}, {"S", "X2"});
    out.r1_b = kInf;
    out.sum_c = gaussian_cmi(cov, {"X1", "X2"}, {"Y"}, {"S"}) -
                gaussian_cmi(cov, {"X1"}, {"S"}, {"Y"});
    return out;
}

}  // namespace macbounds
