// Copyright 2026 The ensdist Authors
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

#ifndef ENSDIST_NUMERICS_SHARDING_HPP_
#define ENSDIST_NUMERICS_SHARDING_HPP_

#include <cstddef>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

#include "ensdist/errors.hpp"
#include "ensdist/numerics/rng.hpp"

namespace ensdist {

/// A fixed split of `total` replicates into contiguous shards. Shard s draws
/// from root.substream(s), so results depend on (seed, stream, shards) only.
struct ShardPlan {
  std::size_t total = 0;
  unsigned shards = 1;

  std::size_t count(unsigned s) const {
    return total / shards + (s < total % shards ? 1 : 0);
  }
};

/// Runs `work(RngStream &, std::size_t count)` once per shard, one thread per
/// shard when there is more than one, and returns the per-shard results in
/// shard order. The first exception thrown by any shard is rethrown.
template <class Work>
auto run_sharded(const RngStream &root, ShardPlan plan, Work &&work) {
  if (plan.shards == 0) throw ParameterError("shards must be at least 1");
  using Result = decltype(work(std::declval<RngStream &>(), std::size_t{}));
  std::vector<Result> results(plan.shards);
  std::vector<std::exception_ptr> errors(plan.shards);
  auto body = [&](unsigned s) {
    try {
      RngStream rng = root.substream(s);
      results[s] = work(rng, plan.count(s));
    } catch (...) {
      errors[s] = std::current_exception();
    }
  };
  if (plan.shards == 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(plan.shards);
    for (unsigned s = 0; s < plan.shards; ++s) threads.emplace_back(body, s);
    for (auto &t : threads) t.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// Draws plan.total values with `draw(RngStream &)` across the shard plan and
/// concatenates them in shard order.
template <class Draw>
auto collect_sharded(const RngStream &root, ShardPlan plan, Draw &&draw) {
  using Value = decltype(draw(std::declval<RngStream &>()));
  auto parts = run_sharded(root, plan, [&draw](RngStream &rng, std::size_t count) {
    std::vector<Value> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(draw(rng));
    return out;
  });
  std::vector<Value> all;
  all.reserve(plan.total);
  for (auto &part : parts) {
    for (auto &v : part) all.push_back(std::move(v));
  }
  return all;
}

}  // namespace ensdist

#endif  // ENSDIST_NUMERICS_SHARDING_HPP_
