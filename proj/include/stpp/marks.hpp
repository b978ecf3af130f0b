#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stpp/errors.hpp"

namespace stpp {

enum class ReferenceMeasure {
    Lebesgue,
    NormalizedLebesgue,
    /// nu = empirical distribution of the observed marks (weight 1/N each).
    Empirical,
};

/// Subset of the mark space used to select points (C and D in K^{CD}).
class MarkSet {
public:
    struct All {};
    struct Range {
        double lo;
        double hi;
        bool lo_closed = true;
        bool hi_closed = true;
    };
    struct Labels {
        std::vector<int> labels;  // sorted, unique
    };

    MarkSet() : kind_(All{}) {}
    static MarkSet all() { return MarkSet(All{}); }
    static MarkSet range(double lo, double hi, bool lo_closed = true, bool hi_closed = true);
    static MarkSet labels(std::vector<int> labels);

    /// "all", "[0,0.5]", "(0.5,1]", "{1}", "{1,2}".
    static MarkSet parse(const std::string& text);
    std::string to_string() const;

    bool contains(double mark) const noexcept;
    bool is_all() const noexcept { return std::holds_alternative<All>(kind_); }
    const auto& kind() const noexcept { return kind_; }

    bool operator==(const MarkSet& o) const;

private:
    explicit MarkSet(std::variant<All, Range, Labels> k) : kind_(std::move(k)) {}
    std::variant<All, Range, Labels> kind_;
};

/// Mark domain plus its reference measure nu.
class MarkSpace {
public:
    struct Continuous {
        double lo;
        double hi;
        ReferenceMeasure reference;
    };
    struct FiniteLabels {
        int k;
        std::vector<double> weights;  // nu({i}) for i = 1..k
    };

    static MarkSpace interval(double lo, double hi,
                              ReferenceMeasure ref = ReferenceMeasure::Lebesgue);
    /// Labels 1..k; counting measure unless weights are given.
    static MarkSpace labels(int k, std::vector<double> weights = {});

    bool is_labels() const noexcept { return std::holds_alternative<FiniteLabels>(kind_); }
    bool is_empirical() const noexcept;
    const auto& kind() const noexcept { return kind_; }

    bool contains(double mark) const noexcept;
    double distance(double a, double b) const noexcept;

    /// nu(C). Empirical measures need the observed marks.
    double measure(const MarkSet& c, std::span<const double> observed = {}) const;
    double total_measure(std::span<const double> observed = {}) const;

    std::string describe() const;
    bool operator==(const MarkSpace& o) const;

private:
    explicit MarkSpace(std::variant<Continuous, FiniteLabels> k) : kind_(std::move(k)) {}
    std::variant<Continuous, FiniteLabels> kind_;
};

}  // namespace stpp
