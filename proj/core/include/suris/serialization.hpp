#pragma once

#include <string>

#include "suris/potentials.hpp"
#include "suris/rigidity_lab.hpp"

namespace suris {

/// JSON form of a potential:
///   {"suris": {"A":..,"B":..,"C":..,"D":..},
///    "trig":  {"cos":[a_1..], "sin":[b_1..], "mean":..}}
/// Either top-level key may be absent (absent part = zero); "mean" is
/// optional inside "trig".  An empty object is the zero potential.
/// Serialization requires the potential to flatten to that shape
/// (canonical_parts); otherwise DomainError.
std::string potential_to_json(const Potential& v);
/// Parses the document above; DomainError on malformed or unknown keys.
Potential potential_from_json(const std::string& text);
/// Reads and parses a potential file; runtime_error with the path on I/O
/// failure, DomainError on malformed content.
Potential load_potential(const std::string& path);

/// Report as a JSON object carrying "tool_version" and the full config echo;
/// keys are sorted, so equal reports serialize byte-identically.
std::string report_to_json(const EstimateReport& rep);

/// Shortest round-trip decimal form of a double ("%.17g" trimmed), used for
/// deterministic CSV cells.
std::string format_double(double v);

/// Writes `text` to `path` atomically: unique temp file in the target
/// directory, fsync'd, then renamed over the destination.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace suris
