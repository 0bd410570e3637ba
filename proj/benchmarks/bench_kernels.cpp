// Copyright 2026 The Persuasion Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Times the OpenMP kernels against their serial reference paths.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "persuasion/agent.hpp"
#include "persuasion/instances.hpp"
#include "persuasion/lp.hpp"

using namespace persuasion;

namespace {

template <typename F>
double time_seconds(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void bench_sigma_sweep(const char* name, const Instance& inst) {
  EsBruteforceOptions serial;
  serial.parallel = false;
  EsBruteforceOptions parallel;
  parallel.parallel = true;
  double serial_value = 0.0, parallel_value = 0.0;
  const double ts =
      time_seconds([&] { serial_value = es_bruteforce(inst, serial).value; });
  const double tp = time_seconds(
      [&] { parallel_value = es_bruteforce(inst, parallel).value; });
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n",
              name, ts, tp, ts / tp,
              serial_value == parallel_value ? "values match"
                                             : "VALUE MISMATCH");
}

void bench_brute_force(const char* name, const Instance& inst,
                       const MechanismTree& mech) {
  double serial_value = 0.0, parallel_value = 0.0;
  const double ts = time_seconds([&] {
    serial_value =
        brute_force_response(inst, mech, 0, 100000000, kTieTol, false);
  });
  const double tp = time_seconds([&] {
    parallel_value =
        brute_force_response(inst, mech, 0, 100000000, kTieTol, true);
  });
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n",
              name, ts, tp, ts / tp,
              serial_value == parallel_value ? "values match"
                                             : "VALUE MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; parallel paths run serially\n");
#endif

  bench_sigma_sweep("sigma sweep P4 (3125 LPs)", reduce_mis(make_path(4)));
  bench_sigma_sweep("sigma sweep C5 (46656 LPs)", reduce_mis(make_cycle(5)));

  ExampleParams params;
  params.n = 7;
  bench_brute_force("profile sweep chain n=7",
                    example_instance("ex5", params),
                    example_mechanism("ex5_pie", params));
  return 0;
}
