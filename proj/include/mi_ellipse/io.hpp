#pragma once

// Body and ellipse ingestion, number formatting and CSV emission.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/conic.hpp"

namespace mie {

// The built-in fixtures: fig1 (the quartic body in MI position), square
// (±1, ±1), strip (±10, ±0.5), rect21 (±2, ±1), disk (unit disk).
std::vector<std::string> builtin_names();
std::optional<ConvexBody> builtin_body(std::string_view name);
EvenQuartic fig1_polynomial();

// {"type":"polygon","vertices":[[x,y],...]}
// {"type":"implicit","coeffs":{"x2":..,"xy":..,"y2":..,"x4":..,"x3y":..,"x2y2":..,"xy3":..,"y4":..}}
// {"type":"radial","samples":[...]}
// Errors: InvalidInput for malformed JSON, plus the body constructor errors.
ConvexBody parse_body(std::string_view json_text);

// A built-in name, else a path to a JSON body file.
// Errors: IoError when the file cannot be read.
ConvexBody load_body(const std::string& path_or_name);

// {"t":..,"phi":..,"area":..} or {"form":[[q00,q01],[q10,q11]]}, bare or under
// an "ellipse" key.
// Errors: InvalidInput.
CenteredEllipse parse_ellipse(std::string_view json_text);

// Shortest round-trip decimal when digits >= 17, else %.{digits}g; "null"
// for non-finite values so the result is valid JSON.
std::string format_number(double v, int digits = 17);

// {"t":..,"phi":..,"area":..,"form":[[..],[..]]}
std::string ellipse_json(const CenteredEllipse& e, int digits = 17);

// Header row then one row per record; '.' decimal separator.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                int digits = 17);

std::string read_text_file(const std::string& path);
// Errors: IoError.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace mie
