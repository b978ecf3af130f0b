#pragma once

#include <string>

#include "stpp/intensity.hpp"
#include "stpp/second_order.hpp"

namespace stpp {

/// Where plugged-in intensities come from.
struct WeightsSpec {
    enum class Kind {
        VoronoiGround,  // lambda_g(x, t) times the mark factor density
        VoronoiMarked,  // joint space-time-mark tessellation
        Separable,      // one of the separable setups
        Constant,       // lambda everywhere
    };
    Kind kind = Kind::VoronoiGround;
    SeparableSetup setup = SeparableSetup::S1_CommonMark;
    bool euclidean_tm = false;
    double lambda = 1.0;
};

/// "voronoi-ground", "voronoi-marked", "separable-S1|S2|S3", "constant:<lambda>".
WeightsSpec parse_weights_spec(const std::string& text);
std::string to_string(const WeightsSpec& s);

/// Intensities at the points of p; lambda_ground always comes from the
/// ground tessellation (or lambda * nu(M) for constants).
Weights plugged_weights(const MarkedPattern& p, const WeightsSpec& spec, const Quadrature& q = {});

/// Builder for repeated use on patterns sharing one ground pattern (mark
/// permutations); the ground estimate is computed once per ground pattern.
WeightsBuilder weights_builder(const WeightsSpec& spec, const Quadrature& q = {});

}  // namespace stpp
