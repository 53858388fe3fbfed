// Copyright 2026 The qdiag Authors
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

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qdiag {

// A complete k-ary tree of circuit breakers (CBs) fed by a single source at
// the root, with one ammeter attached below each leaf CB.
//
// CBs are numbered 1..cb_count() in level order (root = 1, then level 2 left
// to right, ...). Sensors are numbered 1..sensor_count() and sensor i hangs
// off the i-th leaf CB from the left. Levels run from 1 (root) to depth().
class PowerNetwork {
  public:
    static PowerNetwork build_tree(int arity, int depth);

    int arity() const { return arity_; }
    int depth() const { return depth_; }
    int cb_count() const { return cb_count_; }
    int sensor_count() const { return sensor_count_; }

    int level(int cb) const;
    // 0 for the root.
    int parent(int cb) const;
    // Empty for leaves. Children of a CB are contiguous.
    std::vector<int> children(int cb) const;
    bool is_leaf(int cb) const;
    // First CB index on the given level.
    int level_start(int level) const;

    int leaf_of_sensor(int sensor) const;
    int sensor_of_leaf(int cb) const;

    // Root-to-leaf CB indices feeding `sensor`; always depth() long.
    std::vector<int> path(int sensor) const;
    // The CB on path(sensor) at `level` (1-based).
    int cb_at(int sensor, int level) const;

    // Sensors below `cb` form the contiguous range [first, last].
    int first_sensor_under(int cb) const;
    int last_sensor_under(int cb) const;

    bool operator==(const PowerNetwork&) const = default;

  private:
    PowerNetwork(int arity, int depth);
    void check_cb(int cb) const;
    void check_sensor(int sensor) const;

    int arity_;
    int depth_;
    int cb_count_;
    int sensor_count_;
    std::vector<int> level_start_;  // index d holds the first CB on level d; extra slot = cb_count + 1
};

// Ammeter readouts, l_i = 1 for HIGH and 0 for LOW.
class Observation {
  public:
    Observation() = default;
    explicit Observation(std::vector<std::uint8_t> readouts);

    // All-HIGH observation for a healthy network.
    static Observation all_high(const PowerNetwork& net);
    // Reads the bits of a readout string; whitespace, commas and braces are
    // ignored, so "{0101,0101}" and "0101 0101" are equivalent.
    static Observation parse(std::string_view text);

    std::size_t size() const { return readouts_.size(); }
    // 1-based sensor index.
    bool high(int sensor) const;
    const std::vector<std::uint8_t>& readouts() const { return readouts_; }
    int low_count() const;

    // Bits grouped `group` at a time, separated by spaces.
    std::string to_string(int group) const;

    bool operator==(const Observation&) const = default;

  private:
    std::vector<std::uint8_t> readouts_;
};

// Faulted components, by CB and sensor index (separate namespaces).
struct FaultSet {
    std::set<int> cbs;
    std::set<int> sensors;

    std::size_t size() const { return cbs.size() + sensors.size(); }
    bool empty() const { return cbs.empty() && sensors.empty(); }
    void validate(const PowerNetwork& net) const;
    // "{CB 1, sensor 4}" style.
    std::string to_string() const;

    auto operator<=>(const FaultSet&) const = default;
};

// Readouts produced by the network under `faults`. A healthy sensor reports
// whether current reaches it; a faulted sensor reports the complement.
Observation simulate_readout(const PowerNetwork& net, const FaultSet& faults);

// Ground-truth prediction f_i for sensor i under a CB health assignment
// (health[cb-1] = 1 when healthy).
bool powered(const PowerNetwork& net, int sensor, const std::vector<std::uint8_t>& cb_health);

void check_observation(const PowerNetwork& net, const Observation& obs);

}  // namespace qdiag
