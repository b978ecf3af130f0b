#include "config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stpp/catalog.hpp"

namespace stpp::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto s = trim(v);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
    return out;
}

}  // namespace

Config Config::parse(std::istream& in) {
    Config c;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", n);
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", n);
        if (c.has(key)) throw ParseError("duplicate key '" + key + "'", n);
        c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    Config c = parse(in);
    c.base_dir_ = std::filesystem::path(path).parent_path().string();
    return c;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    const std::string v = it == values_.end() ? fallback : it->second;
    resolved_[key] = v;
    return v;
}

std::string Config::required(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) throw ConfigError("missing required key '" + key + "'");
    resolved_[key] = it->second;
    return it->second;
}

double Config::number(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = format_number(fallback);
        return fallback;
    }
    const double v = to_double(key, it->second);
    resolved_[key] = format_number(v);
    return v;
}

long long Config::integer(const std::string& key, long long fallback) const {
    const auto it = values_.find(key);
    long long v = fallback;
    if (it != values_.end()) {
        const auto s = trim(it->second);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError("'" + key + "' expects an integer, got '" + it->second + "'");
        }
    }
    resolved_[key] = std::to_string(v);
    return v;
}

bool Config::flag(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    bool v = fallback;
    if (it != values_.end()) {
        if (it->second == "true" || it->second == "1" || it->second == "yes") v = true;
        else if (it->second == "false" || it->second == "0" || it->second == "no") v = false;
        else throw ConfigError("'" + key + "' expects true or false, got '" + it->second + "'");
    }
    resolved_[key] = v ? "true" : "false";
    return v;
}

void Config::check_keys(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
        if (!allowed.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }
}

std::string Config::echo() const {
    std::string out;
    for (const auto& [k, v] : resolved_) out += k + " = " + v + "\n";
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& item : split(text, ',')) out.push_back(to_double(text, item));
    return out;
}

Window parse_window(const std::string& text) {
    const auto parts = split(text, ';');
    if (parts.size() < 2) throw ConfigError("window needs at least one spatial and one time interval");
    std::vector<Interval> iv;
    for (const auto& p : parts) {
        const auto b = parse_list(p);
        if (b.size() != 2 || !(b[0] < b[1])) throw ConfigError("bad window interval '" + p + "'");
        iv.push_back({b[0], b[1]});
    }
    const Interval t = iv.back();
    iv.pop_back();
    return Window(std::move(iv), t);
}

std::string format_window(const Window& w) {
    std::string out;
    for (const auto& iv : w.spatial()) out += format_number(iv.lo) + "," + format_number(iv.hi) + "; ";
    return out + format_number(w.temporal().lo) + "," + format_number(w.temporal().hi);
}

MarkSpace parse_mark_space(const std::string& text, const std::string& reference,
                           const std::string& weights) {
    const auto parts = split(text, ':');
    if (parts.size() == 2 && parts[0] == "labels") {
        const double k = to_double("marks", parts[1]);
        if (k < 1 || k != static_cast<int>(k)) throw ConfigError("label count must be a positive integer");
        return MarkSpace::labels(static_cast<int>(k), parse_list(weights));
    }
    if (parts.size() == 3 && parts[0] == "interval") {
        ReferenceMeasure ref = ReferenceMeasure::Lebesgue;
        if (reference == "normalized") ref = ReferenceMeasure::NormalizedLebesgue;
        else if (reference == "empirical") ref = ReferenceMeasure::Empirical;
        else if (reference != "lebesgue") throw ConfigError("unknown mark reference '" + reference + "'");
        return MarkSpace::interval(to_double("marks", parts[1]), to_double("marks", parts[2]), ref);
    }
    throw ConfigError("marks must be 'labels:K' or 'interval:lo:hi', got '" + text + "'");
}

}  // namespace stpp::cli
