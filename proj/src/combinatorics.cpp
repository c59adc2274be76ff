#include "orderk/combinatorics.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

#include "orderk/numeric.hpp"
#include "orderk/special.hpp"

namespace orderk {

PoKParams::PoKParams(int k, double lambda) : order(k), rate(lambda) {
    if (k < 1) throw std::domain_error("PoKParams: order must be >= 1");
    if (!(lambda > 0.0)) throw std::domain_error("PoKParams: rate must be > 0");
}

namespace {

double factorial_product_of(const std::vector<int>& x) {
    double prod = 1.0;
    for (int c : x) {
        for (int j = 2; j <= c; ++j) prod *= static_cast<double>(j);
    }
    return prod;
}

void enumerate_rec(int part, long long remaining, std::vector<int>& x,
                   std::vector<PartitionVector>& out) {
    if (part == 1) {
        x[0] = static_cast<int>(remaining);
        PartitionVector pv;
        pv.batch_counts = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            pv.total += static_cast<long long>(i + 1) * x[i];
            pv.batches += x[i];
            pv.log_factorial_product += log_factorial(x[i]);
        }
        pv.factorial_product = factorial_product_of(x);
        out.push_back(std::move(pv));
        x[0] = 0;
        return;
    }
    for (long long c = 0; c * part <= remaining; ++c) {
        x[part - 1] = static_cast<int>(c);
        enumerate_rec(part - 1, remaining - c * part, x, out);
    }
    x[part - 1] = 0;
}

// Reduced per-partition data for pmf evaluation, cached per (k, n).
struct PmfTerms {
    std::vector<long long> batches;
    std::vector<double> log_factorial_product;
};

const PmfTerms& pmf_terms(int k, long long n) {
    thread_local std::map<std::pair<int, long long>, std::unique_ptr<PmfTerms>> cache;
    auto& slot = cache[{k, n}];
    if (!slot) {
        auto terms = std::make_unique<PmfTerms>();
        std::vector<int> x(static_cast<std::size_t>(k), 0);
        std::vector<PartitionVector> parts;
        enumerate_rec(k, n, x, parts);
        terms->batches.reserve(parts.size());
        terms->log_factorial_product.reserve(parts.size());
        for (const auto& p : parts) {
            terms->batches.push_back(p.batches);
            terms->log_factorial_product.push_back(p.log_factorial_product);
        }
        slot = std::move(terms);
    }
    return *slot;
}

}  // namespace

std::vector<PartitionVector> enumerate_partitions(int k, long long n) {
    if (k < 1) throw std::domain_error("enumerate_partitions: k must be >= 1");
    if (n < 0) throw std::domain_error("enumerate_partitions: n must be >= 0");
    std::vector<PartitionVector> out;
    std::vector<int> x(static_cast<std::size_t>(k), 0);
    enumerate_rec(k, n, x, out);
    return out;
}

long long partition_count(int k, long long n) {
    if (k < 1) throw std::domain_error("partition_count: k must be >= 1");
    if (n < 0) return 0;
    // Partitions of n into parts of size <= k.
    std::vector<long long> dp(static_cast<std::size_t>(n) + 1, 0);
    dp[0] = 1;
    for (int part = 1; part <= k; ++part) {
        for (long long m = part; m <= n; ++m) dp[m] += dp[m - part];
    }
    return dp[static_cast<std::size_t>(n)];
}

double pok_pmf(const PoKParams& params, double t, long long n) {
    if (!(t > 0.0)) throw std::domain_error("pok_pmf: t must be > 0");
    if (n < 0) return 0.0;
    const double lt = params.rate * t;
    const double log_lt = std::log(lt);
    const double base = -static_cast<double>(params.order) * lt;
    const PmfTerms& terms = pmf_terms(params.order, n);
    CompensatedSum sum;
    for (std::size_t i = 0; i < terms.batches.size(); ++i) {
        const double b = static_cast<double>(terms.batches[i]);
        sum.add(std::exp(base + b * log_lt - terms.log_factorial_product[i]));
    }
    return sum.value();
}

double pok_pgf(const PoKParams& params, double t, double s) {
    if (!(t > 0.0)) throw std::domain_error("pok_pgf: t must be > 0");
    if (s < 0.0 || s > 1.0) throw std::domain_error("pok_pgf: s must be in [0,1]");
    double powers = 0.0;
    double si = 1.0;
    for (int i = 1; i <= params.order; ++i) {
        si *= s;
        powers += si;
    }
    return std::exp(-params.rate * t * (static_cast<double>(params.order) - powers));
}

double pok_pgf_compound(const PoKParams& params, double t, double s) {
    if (!(t > 0.0)) throw std::domain_error("pok_pgf_compound: t must be > 0");
    if (s < 0.0 || s > 1.0) throw std::domain_error("pok_pgf_compound: s must be in [0,1]");
    const double k = static_cast<double>(params.order);
    double batch_pgf;
    if (s == 1.0) {
        batch_pgf = 1.0;
    } else {
        batch_pgf = (s / k) * (1.0 - std::pow(s, params.order)) / (1.0 - s);
    }
    return std::exp(-k * params.rate * t * (1.0 - batch_pgf));
}

long long pok_tail_cutoff(const PoKParams& params, double t, double eps) {
    if (!(t > 0.0)) throw std::domain_error("pok_tail_cutoff: t must be > 0");
    const double mu = static_cast<double>(params.order) * params.rate * t;
    long long m = static_cast<long long>(mu);
    while (poisson_sf(mu, m) >= eps) ++m;
    return static_cast<long long>(params.order) * m;
}

}  // namespace orderk
