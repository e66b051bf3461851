#pragma once

#include <chrono>
#include <cstdint>

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#endif

namespace lfperf::harness {

/// Timestamp counter on x86; nanoseconds from the monotonic clock elsewhere.
inline std::uint64_t read_cycles() {
#if defined(__x86_64__) || defined(__i386__)
    return __rdtsc();
#else
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
            .count());
#endif
}

/// Counter ticks per second, measured against the monotonic clock.
double cycles_per_second();

inline void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
    _mm_pause();
#endif
}

/// Busy-waits for roughly n counter ticks.
inline void spin_cycles(std::uint64_t n) {
    if (n == 0) return;
    const std::uint64_t end = read_cycles() + n;
    while (read_cycles() < end) {
    }
}

}  // namespace lfperf::harness
