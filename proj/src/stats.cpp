#include "ltab/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "ltab/errors.hpp"

namespace ltab {

namespace {

std::uint64_t to_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument("bad counter value '" + std::string(s) + "'");
    return v;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::uint64_t RunStats::max_its() const {
    std::uint64_t m = 0;
    for (const auto& r : round_counters) m = std::max(m, r.rounds);
    return m;
}

double RunStats::ave_its() const {
    if (round_counters.empty()) return 0.0;
    std::uint64_t total = 0;
    for (const auto& r : round_counters) total += r.rounds;
    return static_cast<double>(total) / static_cast<double>(round_counters.size());
}

std::string RunStats::to_kv() const {
    std::ostringstream out;
    out << "subgoal_count=" << subgoal_count() << '\n'
        << "max_its=" << max_its() << '\n'
        << "ave_its=" << fixed2(ave_its()) << '\n'
        << "answers_produced=" << answers_produced << '\n'
        << "answers_consumed=" << answers_consumed << '\n'
        << "clause_resolutions=" << clause_resolutions << '\n'
        << "undefined_calls=" << undefined_calls << '\n'
        << "steps=" << steps << '\n'
        << "cyclic_bindings=" << cyclic_bindings << '\n'
        << "solutions=" << solutions << '\n';
    for (const auto& r : round_counters) out << "round_counter[" << r.key << "]=" << r.rounds << '\n';
    return out.str();
}

RunStats RunStats::from_kv(std::string_view text) {
    RunStats s;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto eq = line.rfind('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed stats line: " + line);
        std::string_view key(line.data(), eq);
        std::string_view value(line.data() + eq + 1, line.size() - eq - 1);
        if (key.substr(0, 14) == "round_counter[" && key.back() == ']') {
            s.round_counters.push_back({std::string(key.substr(14, key.size() - 15)), to_u64(value)});
        } else if (key == "answers_produced") {
            s.answers_produced = to_u64(value);
        } else if (key == "answers_consumed") {
            s.answers_consumed = to_u64(value);
        } else if (key == "clause_resolutions") {
            s.clause_resolutions = to_u64(value);
        } else if (key == "undefined_calls") {
            s.undefined_calls = to_u64(value);
        } else if (key == "steps") {
            s.steps = to_u64(value);
        } else if (key == "cyclic_bindings") {
            s.cyclic_bindings = to_u64(value);
        } else if (key == "solutions") {
            s.solutions = to_u64(value);
        } else if (key != "subgoal_count" && key != "max_its" && key != "ave_its") {
            throw std::invalid_argument("unknown stats key: " + std::string(key));
        }
    }
    return s;
}

std::string RunStats::to_json() const {
    nlohmann::ordered_json j;
    j["subgoal_count"] = subgoal_count();
    j["max_its"] = max_its();
    j["ave_its"] = ave_its();
    j["answers_produced"] = answers_produced;
    j["answers_consumed"] = answers_consumed;
    j["clause_resolutions"] = clause_resolutions;
    j["undefined_calls"] = undefined_calls;
    j["steps"] = steps;
    j["cyclic_bindings"] = cyclic_bindings;
    j["solutions"] = solutions;
    auto& rc = j["round_counters"] = nlohmann::ordered_json::array();
    for (const auto& r : round_counters) rc.push_back({{"key", r.key}, {"rounds", r.rounds}});
    return j.dump(2);
}

RunStats RunStats::from_json(std::string_view text) {
    auto j = nlohmann::json::parse(text);
    RunStats s;
    s.answers_produced = j.at("answers_produced").get<std::uint64_t>();
    s.answers_consumed = j.at("answers_consumed").get<std::uint64_t>();
    s.clause_resolutions = j.at("clause_resolutions").get<std::uint64_t>();
    s.undefined_calls = j.at("undefined_calls").get<std::uint64_t>();
    s.steps = j.at("steps").get<std::uint64_t>();
    s.cyclic_bindings = j.at("cyclic_bindings").get<std::uint64_t>();
    s.solutions = j.at("solutions").get<std::uint64_t>();
    for (const auto& r : j.at("round_counters"))
        s.round_counters.push_back({r.at("key").get<std::string>(), r.at("rounds").get<std::uint64_t>()});
    return s;
}

}  // namespace ltab
