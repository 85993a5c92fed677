// Copyright 2026 The afcmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "afcmem/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace afc {
namespace {

// The FFTW planner is not re-entrant; execution with the new-array interface is.
class PlanCache {
  public:
    ~PlanCache()
    {
        for (auto &[key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(std::size_t n, FftDirection dir)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, dir == FftDirection::Forward);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        std::vector<fftw_complex> scratch(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch.data(), scratch.data(),
                                          dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) {
            throw std::runtime_error("fftw: unable to create plan");
        }
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache &cache()
{
    static PlanCache instance;
    return instance;
}

} // namespace

void fft_inplace(std::span<std::complex<double>> data, FftDirection dir)
{
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft_inplace: length must be a non-zero power of two");
    }
    auto *buf = reinterpret_cast<fftw_complex *>(data.data());
    fftw_execute_dft(cache().get(n, dir), buf, buf);
}

} // namespace afc
