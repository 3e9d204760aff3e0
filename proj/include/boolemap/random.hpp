#pragma once

// Seeded, splittable random streams. Stream k of seed s is an mt19937_64 seeded
// from splitmix64-mixed (s, k), so any work split over streams reproduces the
// same numbers regardless of which thread consumes which stream.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace boolemap {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

[[nodiscard]] inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform double strictly inside (0, 1), from the top 53 bits.
[[nodiscard]] inline double open_unit(std::mt19937_64& engine) noexcept {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

[[nodiscard]] inline unsigned resolve_workers(unsigned requested) noexcept {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 = hardware concurrency).
/// Items are dealt in contiguous ranges; body must only touch state owned by item i.
/// The first exception thrown by any item is rethrown after all threads finish.
template <class Body>
void parallel_for(std::size_t count, Body&& body, unsigned workers = 0) {
    const std::size_t threads = std::min<std::size_t>(resolve_workers(workers), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t begin = count * t / threads;
            const std::size_t end = count * (t + 1) / threads;
            pool.emplace_back([&, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace boolemap
