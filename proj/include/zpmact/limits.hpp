#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace zpmact {

/* Resource guards for every exhaustive search in the library.  Each guard
 * bounds a predicted iteration count; exceeding it raises guard_error before
 * any expensive work starts, so callers can retry with smaller parameters.
 *
 *   max_group_order  largest matrix group materialised or closed over
 *   max_candidates   largest candidate enumeration (weak-class search,
 *                    full isometry-group filters, orbit seeds)
 *   max_sheets       largest covering degree p^m unfolded into permutations
 */
struct Limits {
    std::uint64_t max_group_order = 1'000'000;
    std::uint64_t max_candidates = 10'000'000;
    std::uint64_t max_sheets = 4096;
};

/* Plain key=value file, '#' starts a comment.  Unknown keys are rejected so
 * a typo cannot silently leave a default in place. */
inline Limits load_limits(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    Limits lim;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string::size_type hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::string::size_type eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
            if (blank)
                continue;
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        }
        auto trim = [](std::string s) {
            std::string::size_type b = s.find_first_not_of(" \t\r");
            std::string::size_type e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string()
                                          : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::uint64_t num = 0;
        try {
            std::size_t used = 0;
            num = std::stoull(val, &used);
            if (used != val.size())
                throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": value for " + key +
                                     " is not an unsigned integer");
        }
        if (key == "max_group_order")
            lim.max_group_order = num;
        else if (key == "max_candidates")
            lim.max_candidates = num;
        else if (key == "max_sheets")
            lim.max_sheets = num;
        else
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown config key: " + key);
    }
    return lim;
}

} // namespace zpmact
