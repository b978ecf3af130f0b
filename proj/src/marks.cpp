#include "stpp/marks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace stpp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_bound(const std::string& s) {
    const std::string v = trim(s);
    if (v == "inf" || v == "+inf") return HUGE_VAL;
    if (v == "-inf") return -HUGE_VAL;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) throw InputError("bad mark-set bound '" + v + "'");
    return d;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

MarkSet MarkSet::range(double lo, double hi, bool lo_closed, bool hi_closed) {
    if (!(lo <= hi)) throw InputError("mark range needs lo <= hi");
    return MarkSet(Range{lo, hi, lo_closed, hi_closed});
}

MarkSet MarkSet::labels(std::vector<int> labels) {
    if (labels.empty()) throw InputError("label set must not be empty");
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return MarkSet(Labels{std::move(labels)});
}

MarkSet MarkSet::parse(const std::string& text) {
    const std::string s = trim(text);
    if (s == "all" || s == "*") return all();
    if (s.size() < 2) throw InputError("cannot parse mark set '" + text + "'");
    const char open = s.front();
    const char close = s.back();
    const std::string body = s.substr(1, s.size() - 2);
    if (open == '{' && close == '}') {
        std::vector<int> labels;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const double v = parse_bound(item);
            if (v != std::floor(v)) throw InputError("labels must be integers in '" + text + "'");
            labels.push_back(static_cast<int>(v));
        }
        return MarkSet::labels(std::move(labels));
    }
    if ((open == '[' || open == '(') && (close == ']' || close == ')')) {
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw InputError("mark range needs two bounds: " + text);
        return range(parse_bound(body.substr(0, comma)), parse_bound(body.substr(comma + 1)),
                     open == '[', close == ']');
    }
    throw InputError("cannot parse mark set '" + text + "'");
}

std::string MarkSet::to_string() const {
    if (std::holds_alternative<All>(kind_)) return "all";
    if (const auto* r = std::get_if<Range>(&kind_)) {
        return std::string(r->lo_closed ? "[" : "(") + format_double(r->lo) + "," +
               format_double(r->hi) + (r->hi_closed ? "]" : ")");
    }
    const auto& l = std::get<Labels>(kind_);
    std::string out = "{";
    for (std::size_t i = 0; i < l.labels.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(l.labels[i]);
    }
    return out + "}";
}

bool MarkSet::contains(double m) const noexcept {
    if (std::holds_alternative<All>(kind_)) return true;
    if (const auto* r = std::get_if<Range>(&kind_)) {
        const bool above = r->lo_closed ? m >= r->lo : m > r->lo;
        const bool below = r->hi_closed ? m <= r->hi : m < r->hi;
        return above && below;
    }
    const auto& l = std::get<Labels>(kind_).labels;
    if (m != std::floor(m)) return false;
    return std::binary_search(l.begin(), l.end(), static_cast<int>(m));
}

bool MarkSet::operator==(const MarkSet& o) const { return to_string() == o.to_string(); }

MarkSpace MarkSpace::interval(double lo, double hi, ReferenceMeasure ref) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InputError("mark interval needs finite lo < hi");
    }
    return MarkSpace(Continuous{lo, hi, ref});
}

MarkSpace MarkSpace::labels(int k, std::vector<double> weights) {
    if (k < 2) throw InputError("finite mark space needs k >= 2 labels");
    if (weights.empty()) weights.assign(static_cast<std::size_t>(k), 1.0);
    if (weights.size() != static_cast<std::size_t>(k)) {
        throw InputError("label weights must have k entries");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw InputError("label weights must be positive");
    }
    return MarkSpace(FiniteLabels{k, std::move(weights)});
}

bool MarkSpace::is_empirical() const noexcept {
    const auto* c = std::get_if<Continuous>(&kind_);
    return c && c->reference == ReferenceMeasure::Empirical;
}

bool MarkSpace::contains(double m) const noexcept {
    if (const auto* c = std::get_if<Continuous>(&kind_)) return c->lo <= m && m <= c->hi;
    const auto& l = std::get<FiniteLabels>(kind_);
    return m == std::floor(m) && m >= 1.0 && m <= static_cast<double>(l.k);
}

double MarkSpace::distance(double a, double b) const noexcept { return std::abs(a - b); }

double MarkSpace::measure(const MarkSet& c, std::span<const double> observed) const {
    if (const auto* l = std::get_if<FiniteLabels>(&kind_)) {
        double s = 0.0;
        for (int i = 1; i <= l->k; ++i) {
            if (c.contains(static_cast<double>(i))) s += l->weights[static_cast<std::size_t>(i - 1)];
        }
        return s;
    }
    const auto& cont = std::get<Continuous>(kind_);
    if (cont.reference == ReferenceMeasure::Empirical) {
        if (observed.empty()) throw InputError("empirical mark measure needs observed marks");
        std::size_t hits = 0;
        for (double m : observed) hits += c.contains(m) ? 1 : 0;
        return static_cast<double>(hits) / static_cast<double>(observed.size());
    }
    double len = 0.0;
    if (c.is_all()) {
        len = cont.hi - cont.lo;
    } else if (const auto* r = std::get_if<MarkSet::Range>(&c.kind())) {
        len = std::max(0.0, std::min(r->hi, cont.hi) - std::max(r->lo, cont.lo));
    } else {
        len = 0.0;  // finite label sets are Lebesgue-null
    }
    if (cont.reference == ReferenceMeasure::NormalizedLebesgue) len /= (cont.hi - cont.lo);
    return len;
}

double MarkSpace::total_measure(std::span<const double> observed) const {
    return measure(MarkSet::all(), observed);
}

std::string MarkSpace::describe() const {
    if (const auto* l = std::get_if<FiniteLabels>(&kind_)) {
        std::string out = "labels(k=" + std::to_string(l->k) + ", weights=";
        for (std::size_t i = 0; i < l->weights.size(); ++i) {
            if (i) out += ",";
            out += format_double(l->weights[i]);
        }
        return out + ")";
    }
    const auto& c = std::get<Continuous>(kind_);
    const char* ref = c.reference == ReferenceMeasure::Lebesgue             ? "lebesgue"
                      : c.reference == ReferenceMeasure::NormalizedLebesgue ? "normalized"
                                                                            : "empirical";
    return "interval[" + format_double(c.lo) + "," + format_double(c.hi) + "](" + ref + ")";
}

bool MarkSpace::operator==(const MarkSpace& o) const { return describe() == o.describe(); }

}  // namespace stpp
