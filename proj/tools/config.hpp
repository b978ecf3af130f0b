#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stpp/errors.hpp"
#include "stpp/geometry.hpp"
#include "stpp/marks.hpp"

namespace stpp::cli {

/// Schema or value problem in a run configuration.
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

/// `key = value` lines; `#` starts a comment. Every read records the
/// resolved value (defaults included) for the config echo.
class Config {
public:
    static Config parse(std::istream& in);
    /// Throws std::ios_base::failure if the file cannot be read.
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string str(const std::string& key, const std::string& fallback) const;
    std::string required(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    long long integer(const std::string& key, long long fallback) const;
    bool flag(const std::string& key, bool fallback) const;

    /// Rejects keys outside `allowed`.
    void check_keys(const std::set<std::string>& allowed) const;

    /// Resolved `key = value` lines, sorted by key.
    std::string echo() const;

    /// Directory of the loaded file, for resolving relative paths.
    const std::string& base_dir() const noexcept { return base_dir_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, std::string> resolved_;
    std::string base_dir_;
};

/// "lo,hi; lo,hi; ...; tlo,thi": spatial intervals then the time interval.
Window parse_window(const std::string& text);
std::string format_window(const Window& w);

/// "labels:K" or "interval:lo:hi", with the reference measure and label
/// weights given separately.
MarkSpace parse_mark_space(const std::string& text, const std::string& reference,
                           const std::string& weights);

std::vector<double> parse_list(const std::string& text);

}  // namespace stpp::cli
