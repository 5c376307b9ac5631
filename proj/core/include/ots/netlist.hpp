#pragma once

// SPICE subcircuit export of the OTS equivalent circuit.

#include <string>

#include "ots/model.hpp"

namespace ots {

struct NetlistOptions {
  std::string subckt_name = "OTS";
  bool include_delay_circuit = true;
  std::string anode = "anode";
  std::string cathode = "cathode";

  friend bool operator==(const NetlistOptions&, const NetlistOptions&) = default;
};

// Nonempty, [A-Za-z0-9_] only.
bool is_valid_identifier(const std::string& s);

// `.subckt <name> <anode> <cathode>` ... `.ends`, ASCII, LF line endings.
// Throws DomainError for invalid identifiers or parameters.
std::string export_subckt(const ModelParams& p, const NetlistOptions& opts = {});

}  // namespace ots
