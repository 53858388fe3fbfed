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

#include "qdiag/netmodel.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "qdiag/error.hpp"

namespace qdiag {

namespace {

constexpr int kMaxNodes = 1 << 24;

}  // namespace

PowerNetwork::PowerNetwork(int arity, int depth) : arity_(arity), depth_(depth) {
    level_start_.assign(static_cast<std::size_t>(depth) + 2, 0);
    long long start = 1;
    long long width = 1;
    for (int d = 1; d <= depth; ++d) {
        level_start_[d] = static_cast<int>(start);
        start += width;
        if (d < depth) {
            width *= arity;
        }
        if (start > kMaxNodes) {
            throw InvalidArgument("tree too large: more than 2^24 circuit breakers");
        }
    }
    level_start_[depth + 1] = static_cast<int>(start);
    cb_count_ = static_cast<int>(start - 1);
    sensor_count_ = static_cast<int>(width);
}

PowerNetwork PowerNetwork::build_tree(int arity, int depth) {
    if (arity < 2) {
        throw InvalidArgument("arity must be at least 2, got " + std::to_string(arity));
    }
    if (depth < 1) {
        throw InvalidArgument("depth must be at least 1, got " + std::to_string(depth));
    }
    return PowerNetwork(arity, depth);
}

void PowerNetwork::check_cb(int cb) const {
    if (cb < 1 || cb > cb_count_) {
        throw InvalidArgument("circuit breaker index " + std::to_string(cb) + " out of range 1.." +
                              std::to_string(cb_count_));
    }
}

void PowerNetwork::check_sensor(int sensor) const {
    if (sensor < 1 || sensor > sensor_count_) {
        throw InvalidArgument("sensor index " + std::to_string(sensor) + " out of range 1.." +
                              std::to_string(sensor_count_));
    }
}

int PowerNetwork::level_start(int level) const {
    if (level < 1 || level > depth_) {
        throw InvalidArgument("level " + std::to_string(level) + " out of range 1.." + std::to_string(depth_));
    }
    return level_start_[level];
}

int PowerNetwork::level(int cb) const {
    check_cb(cb);
    auto it = std::upper_bound(level_start_.begin() + 1, level_start_.end(), cb);
    return static_cast<int>(it - level_start_.begin()) - 1;
}

int PowerNetwork::parent(int cb) const {
    check_cb(cb);
    return cb == 1 ? 0 : (cb - 2) / arity_ + 1;
}

bool PowerNetwork::is_leaf(int cb) const {
    check_cb(cb);
    return cb >= level_start_[depth_];
}

std::vector<int> PowerNetwork::children(int cb) const {
    if (is_leaf(cb)) {
        return {};
    }
    std::vector<int> out(static_cast<std::size_t>(arity_));
    const int first = arity_ * (cb - 1) + 2;
    for (int j = 0; j < arity_; ++j) {
        out[j] = first + j;
    }
    return out;
}

int PowerNetwork::leaf_of_sensor(int sensor) const {
    check_sensor(sensor);
    return level_start_[depth_] + sensor - 1;
}

int PowerNetwork::sensor_of_leaf(int cb) const {
    if (!is_leaf(cb)) {
        throw InvalidArgument("circuit breaker " + std::to_string(cb) + " is not a leaf");
    }
    return cb - level_start_[depth_] + 1;
}

std::vector<int> PowerNetwork::path(int sensor) const {
    std::vector<int> out(static_cast<std::size_t>(depth_));
    int cb = leaf_of_sensor(sensor);
    for (int d = depth_; d >= 1; --d) {
        out[d - 1] = cb;
        cb = cb == 1 ? 0 : (cb - 2) / arity_ + 1;
    }
    return out;
}

int PowerNetwork::cb_at(int sensor, int level) const {
    if (level < 1 || level > depth_) {
        throw InvalidArgument("level " + std::to_string(level) + " out of range 1.." + std::to_string(depth_));
    }
    int cb = leaf_of_sensor(sensor);
    for (int d = depth_; d > level; --d) {
        cb = (cb - 2) / arity_ + 1;
    }
    return cb;
}

int PowerNetwork::first_sensor_under(int cb) const {
    int first = cb;
    int d = level(cb);
    for (; d < depth_; ++d) {
        first = arity_ * (first - 1) + 2;
    }
    return first - level_start_[depth_] + 1;
}

int PowerNetwork::last_sensor_under(int cb) const {
    int last = cb;
    int d = level(cb);
    for (; d < depth_; ++d) {
        last = arity_ * (last - 1) + 1 + arity_;
    }
    return last - level_start_[depth_] + 1;
}

Observation::Observation(std::vector<std::uint8_t> readouts) : readouts_(std::move(readouts)) {
    for (auto b : readouts_) {
        if (b > 1) {
            throw InvalidArgument("readout bits must be 0 or 1");
        }
    }
}

Observation Observation::all_high(const PowerNetwork& net) {
    return Observation(std::vector<std::uint8_t>(static_cast<std::size_t>(net.sensor_count()), 1));
}

Observation Observation::parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char c : text) {
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c == ' ' || c == '\t' || c == ',' || c == '{' || c == '}') {
            continue;
        } else {
            throw InvalidArgument(std::string("unexpected character '") + c + "' in readout");
        }
    }
    return Observation(std::move(bits));
}

bool Observation::high(int sensor) const {
    if (sensor < 1 || static_cast<std::size_t>(sensor) > readouts_.size()) {
        throw InvalidArgument("sensor index " + std::to_string(sensor) + " out of range");
    }
    return readouts_[static_cast<std::size_t>(sensor) - 1] != 0;
}

int Observation::low_count() const {
    return static_cast<int>(std::count(readouts_.begin(), readouts_.end(), 0));
}

std::string Observation::to_string(int group) const {
    std::string out;
    for (std::size_t i = 0; i < readouts_.size(); ++i) {
        if (i > 0 && group > 0 && i % static_cast<std::size_t>(group) == 0) {
            out += ' ';
        }
        out += static_cast<char>('0' + readouts_[i]);
    }
    return out;
}

void FaultSet::validate(const PowerNetwork& net) const {
    for (int cb : cbs) {
        if (cb < 1 || cb > net.cb_count()) {
            throw InvalidArgument("faulted circuit breaker " + std::to_string(cb) + " out of range");
        }
    }
    for (int s : sensors) {
        if (s < 1 || s > net.sensor_count()) {
            throw InvalidArgument("faulted sensor " + std::to_string(s) + " out of range");
        }
    }
}

std::string FaultSet::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int cb : cbs) {
        os << (first ? "" : ", ") << "CB " << cb;
        first = false;
    }
    for (int s : sensors) {
        os << (first ? "" : ", ") << "sensor " << s;
        first = false;
    }
    os << '}';
    return os.str();
}

bool powered(const PowerNetwork& net, int sensor, const std::vector<std::uint8_t>& cb_health) {
    int cb = net.leaf_of_sensor(sensor);
    while (cb != 0) {
        if (!cb_health[static_cast<std::size_t>(cb) - 1]) {
            return false;
        }
        cb = cb == 1 ? 0 : (cb - 2) / net.arity() + 1;
    }
    return true;
}

Observation simulate_readout(const PowerNetwork& net, const FaultSet& faults) {
    faults.validate(net);
    std::vector<std::uint8_t> health(static_cast<std::size_t>(net.cb_count()), 1);
    for (int cb : faults.cbs) {
        health[static_cast<std::size_t>(cb) - 1] = 0;
    }
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(net.sensor_count()));
    for (int s = 1; s <= net.sensor_count(); ++s) {
        bool truth = powered(net, s, health);
        bool reported = faults.sensors.contains(s) ? !truth : truth;
        bits[static_cast<std::size_t>(s) - 1] = reported ? 1 : 0;
    }
    return Observation(std::move(bits));
}

void check_observation(const PowerNetwork& net, const Observation& obs) {
    if (obs.size() != static_cast<std::size_t>(net.sensor_count())) {
        throw InvalidArgument("observation has " + std::to_string(obs.size()) + " readouts but the network has " +
                              std::to_string(net.sensor_count()) + " sensors");
    }
}

}  // namespace qdiag
