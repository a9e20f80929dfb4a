#include "macbounds/dm_region.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace macbounds {

namespace {

constexpr double kMassTol = 1e-12;
constexpr std::size_t kMaxJointEntries = 1000000;
constexpr std::size_t kRefineTopK = 10;
constexpr int kRefineRounds = 50;

void check_prob_vector(const std::vector<double>& p, std::size_t offset, std::size_t len,
                       const char* what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double v = p[offset + i];
        if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kMassTol)
        throw std::invalid_argument(std::string(what) + ": does not sum to 1");
}

// (0, 1] from the top 53 bits; portable across standard library versions.
double unit_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

void dirichlet_slice(std::mt19937_64& rng, double* slice, std::size_t len) {
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        slice[i] = -std::log(unit_open(rng));
        sum += slice[i];
    }
    for (std::size_t i = 0; i < len; ++i) slice[i] /= sum;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t refine_seed(std::uint64_t seed, std::size_t cell, std::size_t cand) {
    return mix64(seed ^ mix64(0x5DEECE66DULL + cell) ^ mix64(0xB5026F5AA96619E9ULL + cand));
}

double r1_at(const RateConstraints& c, double rc) {
    if (rc > c.sum_c) return -1.0;
    return std::min(std::min(c.r1_a, c.r1_b), c.sum_c - rc);
}

std::size_t joint_entries(const DmChannel& ch, std::size_t nu1, std::size_t nu2) {
    return ch.ns * nu1 * nu2 * ch.nx1 * ch.nx2 * ch.ny;
}

}  // namespace

void validate(const DmChannel& ch) {
    if (ch.ns == 0 || ch.nx1 == 0 || ch.nx2 == 0 || ch.ny == 0)
        throw std::invalid_argument("channel alphabets must be non-empty");
    if (ch.state_dist.p.size() != ch.ns)
        throw std::invalid_argument("state pmf size does not match |S|");
    if (ch.kernel.size() != ch.nx1 * ch.nx2 * ch.ns * ch.ny)
        throw std::invalid_argument("kernel size does not match alphabets");
    check_prob_vector(ch.state_dist.p, 0, ch.ns, "state pmf");
    for (std::size_t i = 0; i < ch.nx1 * ch.nx2 * ch.ns; ++i)
        check_prob_vector(ch.kernel, i * ch.ny, ch.ny, "kernel slice");
}

JointPmf inner_joint(const DmChannel& ch, const InnerFactorization& f) {
    validate(ch);
    const std::size_t nu1 = f.nu1, nu2 = f.nu2;
    if (nu1 == 0 || nu2 == 0 || f.p_u1.size() != nu1 || f.p_x1_given_u1.size() != nu1 * ch.nx1 ||
        f.p_u2_given_u1_s.size() != nu1 * ch.ns * nu2 ||
        f.p_x2_given_u1_u2_s.size() != nu1 * nu2 * ch.ns * ch.nx2)
        throw std::invalid_argument("inner factorization shape mismatch");
    if (joint_entries(ch, nu1, nu2) > kMaxJointEntries)
        throw std::invalid_argument("joint alphabet too large");

    check_prob_vector(f.p_u1, 0, nu1, "p(u1)");
    for (std::size_t u1 = 0; u1 < nu1; ++u1)
        check_prob_vector(f.p_x1_given_u1, u1 * ch.nx1, ch.nx1, "p(x1|u1)");
    for (std::size_t i = 0; i < nu1 * ch.ns; ++i)
        check_prob_vector(f.p_u2_given_u1_s, i * nu2, nu2, "p(u2|u1,s)");
    for (std::size_t i = 0; i < nu1 * nu2 * ch.ns; ++i)
        check_prob_vector(f.p_x2_given_u1_u2_s, i * ch.nx2, ch.nx2, "p(x2|u1,u2,s)");

    JointPmf j;
    j.labels = {"S", "U1", "U2", "X1", "X2", "Y"};
    j.dims = {ch.ns, nu1, nu2, ch.nx1, ch.nx2, ch.ny};
    j.p.assign(joint_entries(ch, nu1, nu2), 0.0);
    std::size_t idx = 0;
    for (std::size_t s = 0; s < ch.ns; ++s)
        for (std::size_t u1 = 0; u1 < nu1; ++u1)
            for (std::size_t u2 = 0; u2 < nu2; ++u2) {
                const double base3 = ch.state_dist.p[s] * f.p_u1[u1] *
                                     f.p_u2_given_u1_s[(u1 * ch.ns + s) * nu2 + u2];
                for (std::size_t x1 = 0; x1 < ch.nx1; ++x1) {
                    const double base4 = base3 * f.p_x1_given_u1[u1 * ch.nx1 + x1];
                    for (std::size_t x2 = 0; x2 < ch.nx2; ++x2) {
                        const double base5 =
                            base4 * f.p_x2_given_u1_u2_s[((u1 * nu2 + u2) * ch.ns + s) * ch.nx2 + x2];
                        for (std::size_t y = 0; y < ch.ny; ++y) j.p[idx++] = base5 * ch.w(y, x1, x2, s);
                    }
                }
            }
    return j;
}

JointPmf outer_joint(const DmChannel& ch, const OuterFactorization& f) {
    validate(ch);
    if (f.p_x1.size() != ch.nx1 || f.p_x2_given_x1_s.size() != ch.nx1 * ch.ns * ch.nx2)
        throw std::invalid_argument("outer factorization shape mismatch");
    check_prob_vector(f.p_x1, 0, ch.nx1, "p(x1)");
    for (std::size_t i = 0; i < ch.nx1 * ch.ns; ++i)
        check_prob_vector(f.p_x2_given_x1_s, i * ch.nx2, ch.nx2, "p(x2|x1,s)");

    JointPmf j;
    j.labels = {"S", "X1", "X2", "Y"};
    j.dims = {ch.ns, ch.nx1, ch.nx2, ch.ny};
    j.p.assign(ch.ns * ch.nx1 * ch.nx2 * ch.ny, 0.0);
    std::size_t idx = 0;
    for (std::size_t s = 0; s < ch.ns; ++s)
        for (std::size_t x1 = 0; x1 < ch.nx1; ++x1)
            for (std::size_t x2 = 0; x2 < ch.nx2; ++x2) {
                const double base = ch.state_dist.p[s] * f.p_x1[x1] *
                                    f.p_x2_given_x1_s[(x1 * ch.ns + s) * ch.nx2 + x2];
                for (std::size_t y = 0; y < ch.ny; ++y) j.p[idx++] = base * ch.w(y, x1, x2, s);
            }
    return j;
}

JointPmf marginal(const JointPmf& j, const std::vector<std::string>& axes) {
    std::vector<std::size_t> keep;
    for (const std::string& name : axes) {
        const auto it = std::find(j.labels.begin(), j.labels.end(), name);
        if (it == j.labels.end()) throw std::invalid_argument("unknown axis: " + name);
        keep.push_back(static_cast<std::size_t>(it - j.labels.begin()));
    }

    JointPmf m;
    std::size_t msize = 1;
    for (const std::size_t k : keep) {
        m.labels.push_back(j.labels[k]);
        m.dims.push_back(j.dims[k]);
        msize *= j.dims[k];
    }
    m.p.assign(msize, 0.0);

    // Row-major strides of the source, and the stride each kept axis has in
    // the marginal.
    const std::size_t n = j.dims.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t k = n; k-- > 1;) stride[k - 1] = stride[k] * j.dims[k];
    std::vector<std::size_t> mstride(keep.size(), 1);
    for (std::size_t k = keep.size(); k-- > 1;) mstride[k - 1] = mstride[k] * j.dims[keep[k]];

    for (std::size_t i = 0; i < j.p.size(); ++i) {
        std::size_t mi = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
            mi += ((i / stride[keep[k]]) % j.dims[keep[k]]) * mstride[k];
        m.p[mi] += j.p[i];
    }
    return m;
}

double entropy_bits(const JointPmf& j) {
    double h = 0.0;
    for (const double v : j.p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double mutual_info(const JointPmf& j, const std::vector<std::string>& a,
                   const std::vector<std::string>& b, const std::vector<std::string>& c) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mutual_info: A and B must be non-empty");
    std::vector<std::string> all = a;
    all.insert(all.end(), b.begin(), b.end());
    all.insert(all.end(), c.begin(), c.end());
    std::vector<std::string> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("mutual_info: axis sets must be disjoint");

    auto join = [](std::vector<std::string> lhs, const std::vector<std::string>& rhs) {
        lhs.insert(lhs.end(), rhs.begin(), rhs.end());
        return lhs;
    };
    const double h_ac = entropy_bits(marginal(j, join(a, c)));
    const double h_bc = entropy_bits(marginal(j, join(b, c)));
    const double h_c = c.empty() ? 0.0 : entropy_bits(marginal(j, c));
    const double h_abc = entropy_bits(marginal(j, all));
    return std::max(h_ac + h_bc - h_c - h_abc, 0.0);
}

DmInnerEval dm_inner_constraints(const JointPmf& j) {
    if (j.labels != std::vector<std::string>{"S", "U1", "U2", "X1", "X2", "Y"})
        throw std::invalid_argument("dm_inner_constraints expects axes (S,U1,U2,X1,X2,Y)");
    const double pen = mutual_info(j, {"U2"}, {"S"}, {"U1"});
    DmInnerEval e;
    e.raw_r1_a = mutual_info(j, {"X1"}, {"Y"}, {"U1", "U2"});
    e.raw_r1_b = mutual_info(j, {"X1", "U2"}, {"Y"}, {"U1"}) - pen;
    e.raw_sum_c = mutual_info(j, {"X1", "U1", "U2"}, {"Y"}, {}) - pen;
    e.feasibility = mutual_info(j, {"U2"}, {"Y"}, {"U1", "X1"}) - pen;
    e.rates = RateConstraints{std::max(0.0, e.raw_r1_a), std::max(0.0, e.raw_r1_b),
                              std::max(0.0, e.raw_sum_c)};
    return e;
}

RateConstraints dm_outer_constraints(const JointPmf& j) {
    if (j.labels != std::vector<std::string>{"S", "X1", "X2", "Y"})
        throw std::invalid_argument("dm_outer_constraints expects axes (S,X1,X2,Y)");
    RateConstraints c;
    c.r1_a = mutual_info(j, {"X1"}, {"Y"}, {"S", "X2"});
    c.r1_b = kInf;
    c.sum_c = std::max(0.0, mutual_info(j, {"X1", "X2"}, {"Y"}, {"S"}) -
                                mutual_info(j, {"X1"}, {"S"}, {"Y"}));
    return c;
}

namespace {

InnerFactorization sample_inner(std::mt19937_64& rng, const DmChannel& ch, std::size_t nu1,
                                std::size_t nu2) {
    InnerFactorization f;
    f.nu1 = nu1;
    f.nu2 = nu2;
    f.p_u1.resize(nu1);
    f.p_x1_given_u1.resize(nu1 * ch.nx1);
    f.p_u2_given_u1_s.resize(nu1 * ch.ns * nu2);
    f.p_x2_given_u1_u2_s.resize(nu1 * nu2 * ch.ns * ch.nx2);
    dirichlet_slice(rng, f.p_u1.data(), nu1);
    for (std::size_t i = 0; i < nu1; ++i) dirichlet_slice(rng, f.p_x1_given_u1.data() + i * ch.nx1, ch.nx1);
    for (std::size_t i = 0; i < nu1 * ch.ns; ++i)
        dirichlet_slice(rng, f.p_u2_given_u1_s.data() + i * nu2, nu2);
    for (std::size_t i = 0; i < nu1 * nu2 * ch.ns; ++i)
        dirichlet_slice(rng, f.p_x2_given_u1_u2_s.data() + i * ch.nx2, ch.nx2);
    return f;
}

OuterFactorization sample_outer(std::mt19937_64& rng, const DmChannel& ch) {
    OuterFactorization f;
    f.p_x1.resize(ch.nx1);
    f.p_x2_given_x1_s.resize(ch.nx1 * ch.ns * ch.nx2);
    dirichlet_slice(rng, f.p_x1.data(), ch.nx1);
    for (std::size_t i = 0; i < ch.nx1 * ch.ns; ++i)
        dirichlet_slice(rng, f.p_x2_given_x1_s.data() + i * ch.nx2, ch.nx2);
    return f;
}

struct SliceRef {
    double* data;
    std::size_t len;
};

std::vector<SliceRef> slices_of(InnerFactorization& f, const DmChannel& ch) {
    std::vector<SliceRef> out;
    out.push_back({f.p_u1.data(), f.nu1});
    for (std::size_t i = 0; i < f.nu1; ++i) out.push_back({f.p_x1_given_u1.data() + i * ch.nx1, ch.nx1});
    for (std::size_t i = 0; i < f.nu1 * ch.ns; ++i)
        out.push_back({f.p_u2_given_u1_s.data() + i * f.nu2, f.nu2});
    for (std::size_t i = 0; i < f.nu1 * f.nu2 * ch.ns; ++i)
        out.push_back({f.p_x2_given_u1_u2_s.data() + i * ch.nx2, ch.nx2});
    return out;
}

std::vector<SliceRef> slices_of(OuterFactorization& f, const DmChannel& ch) {
    std::vector<SliceRef> out;
    out.push_back({f.p_x1.data(), ch.nx1});
    for (std::size_t i = 0; i < ch.nx1 * ch.ns; ++i)
        out.push_back({f.p_x2_given_x1_s.data() + i * ch.nx2, ch.nx2});
    return out;
}

/// One coordinate move: mix the slice toward a fresh Dirichlet point, push
/// it toward a simplex vertex, or sharpen it. Vertex pushes let the search
/// reach the deterministic conditionals that rate-region corners need.
void perturb_one_slice(std::vector<SliceRef>& slices, std::mt19937_64& rng, double gamma) {
    const std::size_t pick = static_cast<std::size_t>(rng() % slices.size());
    SliceRef s = slices[pick];
    const std::uint64_t kind = rng() % 3;
    double sum = 0.0;
    if (kind == 0) {
        std::vector<double> fresh(s.len);
        dirichlet_slice(rng, fresh.data(), s.len);
        for (std::size_t i = 0; i < s.len; ++i) {
            s.data[i] = (1.0 - gamma) * s.data[i] + gamma * fresh[i];
            sum += s.data[i];
        }
    } else if (kind == 1) {
        const std::size_t vertex = static_cast<std::size_t>(rng() % s.len);
        for (std::size_t i = 0; i < s.len; ++i) {
            s.data[i] = (1.0 - gamma) * s.data[i] + (i == vertex ? gamma : 0.0);
            sum += s.data[i];
        }
    } else {
        for (std::size_t i = 0; i < s.len; ++i) {
            s.data[i] = s.data[i] * s.data[i];
            sum += s.data[i];
        }
    }
    for (std::size_t i = 0; i < s.len; ++i) s.data[i] /= sum;
}

/// Greedy search shared by the inner and outer cases. Sample `budget`
/// factorizations, then for each rc cell refine the top candidates toward a
/// larger r1 at that cell. Every feasible evaluation joins the pool.
template <typename Factorization, typename Sampler, typename Evaluator>
std::vector<RateConstraints> search_constraints(const DmChannel& ch, int budget,
                                                std::uint64_t seed, Sampler sample,
                                                Evaluator evaluate) {
    if (budget < 0) throw std::invalid_argument("budget must be non-negative");
    std::mt19937_64 rng(seed);
    std::vector<RateConstraints> pool;
    std::vector<std::pair<Factorization, RateConstraints>> cands;
    for (int i = 0; i < budget; ++i) {
        Factorization f = sample(rng);
        const auto rates = evaluate(f);
        if (!rates) continue;
        pool.push_back(*rates);
        cands.emplace_back(std::move(f), *rates);
    }
    if (cands.empty()) return pool;

    const std::vector<double> grid = default_rc_grid(pool);
    for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        const double rc = grid[ci];
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < cands.size(); ++k)
            if (r1_at(cands[k].second, rc) >= 0.0) order.push_back(k);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
            return r1_at(cands[l].second, rc) > r1_at(cands[r].second, rc);
        });
        if (order.size() > kRefineTopK) order.resize(kRefineTopK);

        for (const std::size_t k : order) {
            std::mt19937_64 rng2(refine_seed(seed, ci, k));
            Factorization local = cands[k].first;
            double best = r1_at(cands[k].second, rc);
            for (int round = 0; round < kRefineRounds; ++round) {
                const double gamma =
                    0.5 * std::pow(0.04, static_cast<double>(round) / (kRefineRounds - 1));
                Factorization trial = local;
                auto slices = slices_of(trial, ch);
                perturb_one_slice(slices, rng2, gamma);
                const auto rates = evaluate(trial);
                if (!rates) continue;
                pool.push_back(*rates);
                const double v = r1_at(*rates, rc);
                if (v > best) {
                    best = v;
                    local = std::move(trial);
                }
            }
        }
    }
    return pool;
}

}  // namespace

std::vector<RateConstraints> dm_inner_search_constraints(const DmChannel& ch, std::size_t u1_size,
                                                         std::size_t u2_size, int budget,
                                                         std::uint64_t seed) {
    validate(ch);
    if (u1_size == 0 || u2_size == 0) throw std::invalid_argument("auxiliary alphabets must be non-empty");
    if (joint_entries(ch, u1_size, u2_size) > kMaxJointEntries)
        throw std::invalid_argument("joint alphabet too large");
    return search_constraints<InnerFactorization>(
        ch, budget, seed,
        [&](std::mt19937_64& rng) { return sample_inner(rng, ch, u1_size, u2_size); },
        [&](const InnerFactorization& f) -> std::optional<RateConstraints> {
            const DmInnerEval e = dm_inner_constraints(inner_joint(ch, f));
            if (!e.feasible()) return std::nullopt;
            return e.rates;
        });
}

std::vector<RateConstraints> dm_outer_search_constraints(const DmChannel& ch, int budget,
                                                         std::uint64_t seed) {
    validate(ch);
    return search_constraints<OuterFactorization>(
        ch, budget, seed, [&](std::mt19937_64& rng) { return sample_outer(rng, ch); },
        [&](const OuterFactorization& f) -> std::optional<RateConstraints> {
            return dm_outer_constraints(outer_joint(ch, f));
        });
}

RegionBoundary dm_inner_search(const DmChannel& ch, std::size_t u1_size, std::size_t u2_size,
                               int budget, std::uint64_t seed) {
    const auto pool = dm_inner_search_constraints(ch, u1_size, u2_size, budget, seed);
    return boundary_of_constraints(pool, default_rc_grid(pool));
}

RegionBoundary dm_outer_search(const DmChannel& ch, int budget, std::uint64_t seed) {
    const auto pool = dm_outer_search_constraints(ch, budget, seed);
    return boundary_of_constraints(pool, default_rc_grid(pool));
}

bool fm_equivalence_check(double a, double b, double c, double d, double grid_step) {
    if (!(a >= 0.0) || !(b >= 0.0) || !(c >= 0.0) || !std::isfinite(a + b + c) || std::isnan(d))
        throw std::invalid_argument("fm_equivalence_check: bounds must be non-negative finite");
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (d <= 0.0) return true;  // binning constraint violated; nothing to project

    const double eps = 1e-9;
    const auto le = [eps](double x, double y) { return x <= y + eps; };
    const int nrc = static_cast<int>(std::ceil(c / grid_step)) + 2;
    const int nr1 = static_cast<int>(std::ceil(std::min(a, b) / grid_step)) + 2;
    for (int i = 0; i <= nrc; ++i) {
        const double rc = i * grid_step;
        for (int jj = 0; jj <= nr1; ++jj) {
            const double r1 = jj * grid_step;
            const bool projected = le(r1, a) && le(r1, b) && le(rc + r1, c);
            bool split = false;
            for (int k = 0; k <= i && !split; ++k) {
                const double rc2 = k * grid_step;  // rc1 = rc - rc2 >= 0
                split = le(r1, a) && le(r1, b) && le(rc + r1, c) && le(rc2 + r1, b) && le(rc2, d);
            }
            if (split != projected) return false;
        }
    }
    return true;
}

DmChannel load_dm_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    std::size_t pos = 0;
    auto next = [&]() -> const std::string& {
        if (pos >= tokens.size()) throw std::invalid_argument("channel file truncated: " + path);
        return tokens[pos++];
    };
    auto next_size = [&]() {
        const long v = std::stol(next());
        if (v < 1) throw std::invalid_argument("alphabet sizes must be >= 1");
        return static_cast<std::size_t>(v);
    };

    DmChannel ch;
    ch.ns = next_size();
    ch.nx1 = next_size();
    ch.nx2 = next_size();
    ch.ny = next_size();
    if (ch.ns * ch.nx1 * ch.nx2 * ch.ny > kMaxJointEntries)
        throw std::invalid_argument("channel alphabets too large");
    ch.state_dist.p.resize(ch.ns);
    for (double& v : ch.state_dist.p) v = std::stod(next());
    ch.kernel.resize(ch.nx1 * ch.nx2 * ch.ns * ch.ny);
    for (double& v : ch.kernel) v = std::stod(next());
    if (pos != tokens.size()) throw std::invalid_argument("trailing data in channel file: " + path);
    validate(ch);
    return ch;
}

void save_dm_channel(const DmChannel& ch, const std::string& path) {
    validate(ch);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write channel file: " + path);
    out.precision(17);
    out << ch.ns << ' ' << ch.nx1 << ' ' << ch.nx2 << ' ' << ch.ny << '\n';
    for (std::size_t s = 0; s < ch.ns; ++s) out << ch.state_dist.p[s] << (s + 1 < ch.ns ? ' ' : '\n');
    for (std::size_t row = 0; row < ch.nx1 * ch.nx2 * ch.ns; ++row) {
        for (std::size_t y = 0; y < ch.ny; ++y)
            out << ch.kernel[row * ch.ny + y] << (y + 1 < ch.ny ? ' ' : '\n');
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

DmChannel xor_channel() {
    DmChannel ch;
    ch.ns = 1;
    ch.nx1 = ch.nx2 = ch.ny = 2;
    ch.state_dist.p = {1.0};
    ch.kernel.assign(8, 0.0);
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2) ch.kernel[((x1 * 2 + x2) * 1 + 0) * 2 + (x1 ^ x2)] = 1.0;
    return ch;
}

}  // namespace macbounds
