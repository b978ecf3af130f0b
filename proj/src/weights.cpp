#include "stpp/weights.hpp"

#include <memory>
#include <mutex>

namespace stpp {

namespace {

std::vector<double> ground_lambda(const MarkedPattern& p, const WeightsSpec& spec, const Quadrature& q) {
    if (spec.kind == WeightsSpec::Kind::Constant) {
        return std::vector<double>(p.size(), spec.lambda * p.nu_total());
    }
    const VoronoiEstimate g = voronoi_ground(p, q);
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = g.value_at_point(i);
    return out;
}

std::vector<double> marked_lambda(const MarkedPattern& p, const WeightsSpec& spec, const Quadrature& q,
                                  const std::vector<double>& ground) {
    std::vector<double> out(p.size());
    switch (spec.kind) {
        case WeightsSpec::Kind::Constant:
            out.assign(p.size(), spec.lambda);
            break;
        case WeightsSpec::Kind::VoronoiGround: {
            const VoronoiEstimate m = voronoi_mark_factor(p, q);
            const double n = static_cast<double>(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) out[i] = ground[i] * m.value_at_point(i) / n;
            break;
        }
        case WeightsSpec::Kind::VoronoiMarked: {
            const VoronoiEstimate m = voronoi_marked(p, q);
            for (std::size_t i = 0; i < p.size(); ++i) out[i] = m.value_at_point(i);
            break;
        }
        case WeightsSpec::Kind::Separable: {
            const SeparableIntensity s = voronoi_separable(p, spec.setup, {spec.euclidean_tm}, q);
            for (std::size_t i = 0; i < p.size(); ++i) out[i] = s.value_at_point(i);
            break;
        }
    }
    return out;
}

bool same_ground(const GroundPattern& a, const GroundPattern& b) {
    if (a.size() != b.size() || a.dim() != b.dim() || !(a.window() == b.window())) return false;
    for (int k = 0; k < a.dim(); ++k) {
        if (!std::equal(a.axis(k).begin(), a.axis(k).end(), b.axis(k).begin())) return false;
    }
    return std::equal(a.times().begin(), a.times().end(), b.times().begin());
}

}  // namespace

WeightsSpec parse_weights_spec(const std::string& text) {
    WeightsSpec s;
    if (text == "voronoi-ground") return s;
    if (text == "voronoi-marked") {
        s.kind = WeightsSpec::Kind::VoronoiMarked;
        return s;
    }
    if (text.rfind("separable-", 0) == 0) {
        s.kind = WeightsSpec::Kind::Separable;
        std::string rest = text.substr(10);
        if (rest.size() > 10 && rest.substr(rest.size() - 10) == "-euclidean") {
            s.euclidean_tm = true;
            rest = rest.substr(0, rest.size() - 10);
        }
        if (rest == "S1") s.setup = SeparableSetup::S1_CommonMark;
        else if (rest == "S2") s.setup = SeparableSetup::S2_NonSepCommonMark;
        else if (rest == "S3") s.setup = SeparableSetup::S3_TimeMark;
        else throw InputError("unknown separable setup '" + rest + "'");
        return s;
    }
    if (text.rfind("constant:", 0) == 0) {
        s.kind = WeightsSpec::Kind::Constant;
        try {
            s.lambda = std::stod(text.substr(9));
        } catch (const std::exception&) {
            throw InputError("bad constant intensity '" + text + "'");
        }
        if (!(s.lambda > 0.0)) throw InputError("constant intensity must be > 0");
        return s;
    }
    throw InputError("unknown weights '" + text +
                     "' (expected voronoi-ground, voronoi-marked, separable-S1|S2|S3, constant:<lambda>)");
}

std::string to_string(const WeightsSpec& s) {
    switch (s.kind) {
        case WeightsSpec::Kind::VoronoiGround: return "voronoi-ground";
        case WeightsSpec::Kind::VoronoiMarked: return "voronoi-marked";
        case WeightsSpec::Kind::Separable: {
            std::string name = "separable-";
            name += s.setup == SeparableSetup::S1_CommonMark ? "S1"
                    : s.setup == SeparableSetup::S2_NonSepCommonMark ? "S2" : "S3";
            return s.euclidean_tm ? name + "-euclidean" : name;
        }
        case WeightsSpec::Kind::Constant: return "constant:" + std::to_string(s.lambda);
    }
    return "?";
}

Weights plugged_weights(const MarkedPattern& p, const WeightsSpec& spec, const Quadrature& q) {
    Weights w;
    w.source = spec.kind == WeightsSpec::Kind::Constant ? WeightsSource::TrueIntensity
                                                        : WeightsSource::PluggedEstimate;
    w.lambda_ground = ground_lambda(p, spec, q);
    w.lambda = marked_lambda(p, spec, q, w.lambda_ground);
    return w;
}

WeightsBuilder weights_builder(const WeightsSpec& spec, const Quadrature& q) {
    struct Cache {
        std::mutex m;
        std::unique_ptr<GroundPattern> ground;
        std::vector<double> lambda;
    };
    auto cache = std::make_shared<Cache>();
    return [spec, q, cache](const MarkedPattern& p) {
        std::vector<double> ground;
        {
            std::lock_guard<std::mutex> lock(cache->m);
            if (cache->ground && same_ground(*cache->ground, p.ground())) ground = cache->lambda;
        }
        if (ground.empty() && p.size() > 0) {
            ground = ground_lambda(p, spec, q);
            std::lock_guard<std::mutex> lock(cache->m);
            cache->ground = std::make_unique<GroundPattern>(p.ground());
            cache->lambda = ground;
        }
        Weights w;
        w.source = spec.kind == WeightsSpec::Kind::Constant ? WeightsSource::TrueIntensity
                                                            : WeightsSource::PluggedEstimate;
        w.lambda = marked_lambda(p, spec, q, ground);
        w.lambda_ground = std::move(ground);
        return w;
    };
}

}  // namespace stpp
