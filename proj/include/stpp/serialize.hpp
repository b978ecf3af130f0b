#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "stpp/inference.hpp"
#include "stpp/second_order.hpp"

namespace stpp {

/// `r,t,k_hat,k_poisson,diff` rows, r outer.
void write_ksurface_csv(std::ostream& out, const KSurface& k);
nlohmann::json ksurface_json(const KSurface& k);

/// `r,t,observed,lower,upper,exceeds` rows, r outer.
void write_envelope_csv(std::ostream& out, const EnvelopeSet& e);
nlohmann::json envelope_json(const EnvelopeSet& e);

/// Header line plus one row per entry; numbers in shortest round-trip form.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace stpp
