// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The beamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMLEARN_KV_CONFIG_HPP
#define BEAMLEARN_KV_CONFIG_HPP

#include "beamlearn/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace beamlearn {

// Flat `key = value` text configuration. Lines starting with '#' are comments,
// blank lines are ignored, keys must be unique.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::istream& in, const std::string& source = "<config>") {
        KeyValueConfig cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto text = trim(strip_comment(line));
            if (text.empty())
                continue;
            const auto eq = text.find('=');
            if (eq == std::string::npos)
                throw ParseError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
            auto key = trim(text.substr(0, eq));
            auto value = trim(text.substr(eq + 1));
            if (key.empty())
                throw ParseError(source + ":" + std::to_string(lineno) + ": empty key");
            if (!cfg.values_.emplace(key, value).second)
                throw ParseError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        return cfg;
    }

    static KeyValueConfig parse_string(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    static KeyValueConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw ParseError("cannot open config file '" + path + "'");
        return parse(in, path);
    }

    bool contains(const std::string& key) const { return values_.count(key) != 0; }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        return it == values_.end() ? fallback : to_double(it->second, key);
    }

    long long get_int(const std::string& key, long long fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        long long out = 0;
        const auto& s = it->second;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ParseError("key '" + key + "': expected an integer, got '" + s + "'");
        return out;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        const auto& s = it->second;
        if (s == "true" || s == "1" || s == "yes" || s == "on")
            return true;
        if (s == "false" || s == "0" || s == "no" || s == "off")
            return false;
        throw ParseError("key '" + key + "': expected a boolean, got '" + s + "'");
    }

    // Comma separated list of reals.
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback = {}) const {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        return parse_doubles(it->second, key);
    }

    // Semicolon separated groups of comma separated reals, e.g. "-42, -38; 3, 7".
    std::vector<std::vector<double>> get_groups(const std::string& key) const {
        used_.insert(key);
        std::vector<std::vector<double>> out;
        auto it = values_.find(key);
        if (it == values_.end())
            return out;
        for (const auto& group : split(it->second, ';'))
            out.push_back(parse_doubles(group, key));
        return out;
    }

    // Keys present in the file that no getter has asked for; used to reject typos.
    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k))
                out.push_back(k);
        return out;
    }

    void reject_unknown_keys() const {
        const auto unknown = unused_keys();
        if (!unknown.empty())
            throw ParseError("unknown config key '" + unknown.front() + "'");
    }

    static std::vector<double> parse_doubles(const std::string& text, const std::string& key) {
        std::vector<double> out;
        for (const auto& item : split(text, ','))
            out.push_back(to_double(item, key));
        return out;
    }

private:
    static std::string strip_comment(const std::string& line) {
        const auto hash = line.find('#');
        return hash == std::string::npos ? line : line.substr(0, hash);
    }

    static std::string trim(const std::string& s) {
        const auto first = s.find_first_not_of(" \t\r\n");
        if (first == std::string::npos)
            return {};
        const auto last = s.find_last_not_of(" \t\r\n");
        return s.substr(first, last - first + 1);
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string item;
        std::istringstream in(s);
        while (std::getline(in, item, sep))
            out.push_back(trim(item));
        return out;
    }

    static double to_double(const std::string& raw, const std::string& key) {
        const auto s = trim(raw);
        if (s.empty())
            throw ParseError("key '" + key + "': empty number");
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ParseError("key '" + key + "': expected a number, got '" + s + "'");
        }
        if (used != s.size() || !std::isfinite(value))
            throw ParseError("key '" + key + "': expected a finite number, got '" + s + "'");
        return value;
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

} // namespace beamlearn

#endif // BEAMLEARN_KV_CONFIG_HPP
