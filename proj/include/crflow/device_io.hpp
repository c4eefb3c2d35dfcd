#pragma once

#include <cstdint>
#include <string>

#include "crflow/model.hpp"
#include "json.hpp"

namespace crflow {

// Device spec documents are JSON:
//
//   {
//     "qubits": [{"name": "c", "role": "control", "omega_mhz": 5114,
//                 "alpha_mhz": -330, "cutoff": 4}, ...],
//     "couplings": [{"a": "c", "b": "t", "j_mhz": 3.8}],
//     "drive": {"amplitude_mhz": 50, "phase_rad": 3.141592653589793,
//               "mode": "dressed_target" | "bare_target" | "explicit_frequency",
//               "frequency_mhz": 4914},
//     "crosstalk": {"a_c": 0, "a_t": 0, "phi_t_rad": 0},
//     "options": {"rwa": true, "kerr_mode": false, "include_beta": false,
//                 "include_nu03": false}
//   }
//
// Numeric fields take a plain number in the unit named by the key suffix,
// or a string "<number> <unit>" (Hz, kHz, MHz, GHz for frequencies; rad,
// deg for angles). A unit of the wrong kind raises UnitError.

DeviceSpec parse_device_spec(const std::string& path);
DeviceSpec device_spec_from_json(const nlohmann::json& doc);
nlohmann::json device_spec_to_json(const DeviceSpec& spec);

// FNV-1a of the canonical JSON dump.
std::uint64_t spec_hash(const DeviceSpec& spec);

}  // namespace crflow
