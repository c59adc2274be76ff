#pragma once

#include <cstdint>
#include <vector>

namespace orderk {

/// Parameters of a Poisson process of order k: events arrive in batches of
/// size 1..order, each batch size equally likely, batches arriving at rate
/// order * rate.
struct PoKParams {
    int order;    // k >= 1
    double rate;  // lambda > 0, per unit time

    PoKParams(int k, double lambda);
};

/// One solution x of x_1 + 2 x_2 + ... + k x_k = n, with the derived
/// quantities the order-k pmf needs: the number of batches (sum of x) and
/// the product of factorials of the entries.
struct PartitionVector {
    std::vector<int> batch_counts;  // x_1..x_k
    long long total = 0;            // n
    long long batches = 0;          // sum_i x_i
    double factorial_product = 1.0;
    double log_factorial_product = 0.0;
};

/// All ways to assemble a total of n from batches of size at most k.
/// Ordered with the count of the largest batch size varying slowest,
/// ascending; n = 0 yields the single all-zeros vector.
/// Throws std::domain_error for k < 1 or n < 0.
std::vector<PartitionVector> enumerate_partitions(int k, long long n);

/// |Omega(k,n)| without materializing the set.
long long partition_count(int k, long long n);

/// P[N^(k)(t) = n]: the partition sum of e^{-k lambda t} (lambda t)^batches
/// / factorial_product, accumulated term-by-term in log space with
/// compensated summation.
double pok_pmf(const PoKParams& params, double t, long long n);

/// Probability generating function E[s^{N^(k)(t)}] = exp(-lambda t (k - sum_{i<=k} s^i)).
double pok_pgf(const PoKParams& params, double t, double s);

/// Same pgf through the batch-size generating function,
/// exp(-k lambda t (1 - G_X(s))) with G_X(s) = (s/k)(1-s^k)/(1-s).
double pok_pgf_compound(const PoKParams& params, double t, double s);

/// Smallest N* with P[N^(k)(t) > N*] <= eps, from the bound
/// P[N^(k)(t) > N*] <= P[Poisson(k lambda t) > N*/k].
long long pok_tail_cutoff(const PoKParams& params, double t, double eps = 1e-12);

}  // namespace orderk
