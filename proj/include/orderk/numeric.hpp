#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace orderk {

/// Neumaier-compensated accumulator. Summation order still matters for
/// bit-reproducibility, so callers must feed terms in a fixed order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Deterministic parallel map-reduce over replication indices.
///
/// Work is split into fixed-size chunks; whichever thread picks up a chunk
/// computes a private accumulator for it, and the chunk partials are folded
/// in chunk order afterwards. Results are therefore bit-identical for any
/// thread count, provided per_rep depends only on the replication index.
///
///   make()                 -> Acc
///   per_rep(rep, acc)      -> void
///   combine(into, from)    -> void
template <class MakeAcc, class PerRep, class Combine>
auto chunked_reduce(std::size_t n_reps, unsigned n_threads, MakeAcc make, PerRep per_rep,
                    Combine combine) {
    using Acc = decltype(make());
    constexpr std::size_t kChunk = 1024;
    const std::size_t n_chunks = (n_reps + kChunk - 1) / kChunk;

    std::vector<std::optional<Acc>> partials(n_chunks);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            Acc acc = make();
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(lo + kChunk, n_reps);
            for (std::size_t rep = lo; rep < hi; ++rep) per_rep(rep, acc);
            partials[c] = std::move(acc);
        }
    };

    if (n_threads <= 1 || n_chunks <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const unsigned n = std::min<std::size_t>(n_threads, n_chunks);
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Acc total = make();
    for (std::size_t c = 0; c < n_chunks; ++c) combine(total, std::move(*partials[c]));
    return total;
}

}  // namespace orderk
