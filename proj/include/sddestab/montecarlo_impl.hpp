/*
   Copyright 2026 The sddestab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sddestab {

namespace detail {

// Mean and sum of squared deviations per node (Welford / Chan merge).
struct Moments {
    std::size_t count = 0;
    std::vector<double> mean;
    std::vector<double> m2;

    explicit Moments(std::size_t nodes = 0) : mean(nodes, 0.0), m2(nodes, 0.0) {}

    void add(std::span<const double> x) {
        ++count;
        const double n = static_cast<double>(count);
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double delta = x[i] - mean[i];
            mean[i] += delta / n;
            m2[i] += delta * (x[i] - mean[i]);
        }
    }

    void merge(const Moments& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double delta = other.mean[i] - mean[i];
            mean[i] += delta * nb / n;
            m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        count += other.count;
    }
};

}  // namespace detail

template <typename Sample>
NodeStatistics ensemble_statistics(std::size_t paths, std::size_t nodes,
                                   const MonteCarloOptions& options, Sample&& sample) {
    if (paths == 0) throw ParameterError("Monte Carlo needs at least one path");
    const std::size_t chunk = std::max<std::size_t>(options.chunk, 1);
    const std::size_t chunks = (paths + chunk - 1) / chunk;
    std::vector<detail::Moments> partial(chunks, detail::Moments(nodes));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::size_t error_chunk = chunks;

    auto worker = [&]() {
        std::vector<double> values(nodes);
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                const std::size_t end = std::min(paths, (c + 1) * chunk);
                for (std::size_t p = c * chunk; p < end; ++p) {
                    sample(p, std::span<double>(values));
                    partial[c].add(values);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                // keep the error of the lowest chunk so reports are reproducible
                if (c < error_chunk) {
                    error_chunk = c;
                    error = std::current_exception();
                }
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, chunks);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    detail::Moments total(nodes);
    for (const auto& part : partial) total.merge(part);

    NodeStatistics stats;
    stats.mean = total.mean;
    stats.std_error.assign(nodes, 0.0);
    if (total.count > 1) {
        const double n = static_cast<double>(total.count);
        for (std::size_t i = 0; i < nodes; ++i)
            stats.std_error[i] = std::sqrt(std::max(total.m2[i], 0.0) / (n - 1.0) / n);
    }
    return stats;
}

}  // namespace sddestab
