#include "mi_ellipse/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mi_ellipse/error.hpp"

namespace mie {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(Errc::InvalidInput, std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

ConvexBody rectangle(double a, double b) {
  return body_from_polygon({{a, b}, {-a, b}, {-a, -b}, {a, -b}});
}

}  // namespace

std::vector<std::string> builtin_names() { return {"fig1", "square", "strip", "rect21", "disk"}; }

EvenQuartic fig1_polynomial() {
  return {1.355, -0.58, 1.005, -0.1264, 0.58, -1.041, 0.58, 0.2236};
}

std::optional<ConvexBody> builtin_body(std::string_view name) {
  if (name == "fig1") return body_from_implicit(fig1_polynomial());
  if (name == "square") return rectangle(1.0, 1.0);
  if (name == "strip") return rectangle(10.0, 0.5);
  if (name == "rect21") return rectangle(2.0, 1.0);
  if (name == "disk") return body_from_implicit(EvenQuartic{1.0, 0.0, 1.0});
  return std::nullopt;
}

ConvexBody parse_body(std::string_view json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw Error(Errc::InvalidInput, "body needs a string field 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "polygon") {
      std::vector<Vec2> v;
      for (const json& p : j.at("vertices")) {
        if (!p.is_array() || p.size() != 2) throw Error(Errc::InvalidInput, "vertex must be [x, y]");
        v.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      return body_from_polygon(std::move(v));
    }
    if (type == "implicit") {
      const json& c = j.at("coeffs");
      auto get = [&](const char* k) { return c.contains(k) ? number(c, k) : 0.0; };
      return body_from_implicit(EvenQuartic{get("x2"), get("xy"), get("y2"), get("x4"), get("x3y"),
                                            get("x2y2"), get("xy3"), get("y4")});
    }
    if (type == "radial") {
      return body_from_radial_samples(j.at("samples").get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("bad body field: ") + e.what());
  }
  throw Error(Errc::InvalidInput, "unknown body type '" + type + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::IoError, "write failed for '" + path + "'");
}

ConvexBody load_body(const std::string& path_or_name) {
  if (auto b = builtin_body(path_or_name)) return *b;
  return parse_body(read_text_file(path_or_name));
}

CenteredEllipse parse_ellipse(std::string_view json_text) {
  json j = parse_json(json_text);
  if (!j.is_object()) throw Error(Errc::InvalidInput, "ellipse must be a JSON object");
  // Accept a whole `mi` / `john` / `loewner` result as well.
  if (j.contains("ellipse") && j.at("ellipse").is_object()) j = json(j.at("ellipse"));
  if (j.contains("form")) {
    const json& f = j.at("form");
    try {
      Mat2 q;
      q << f.at(0).at(0).get<double>(), f.at(0).at(1).get<double>(), f.at(1).at(0).get<double>(),
          f.at(1).at(1).get<double>();
      if (std::abs(q(0, 1) - q(1, 0)) > 1e-12 * q.norm() || q(0, 0) <= 0.0 || q.determinant() <= 0.0) {
        throw Error(Errc::InvalidInput, "form must be symmetric positive definite");
      }
      return CenteredEllipse(q);
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidInput, std::string("bad form: ") + e.what());
    }
  }
  const double area = number(j, "area");
  if (!(area > 0.0) || !std::isfinite(area)) throw Error(Errc::InvalidInput, "area must be positive");
  return CenteredEllipse::from_params(number(j, "t"), number(j, "phi"), area);
}

std::string format_number(double v, int digits) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) v = 0.0;  // no "-0"
  if (digits >= 17) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", std::max(1, digits), v);
  return buf;
}

std::string ellipse_json(const CenteredEllipse& e, int digits) {
  const Mat2& q = e.form();
  std::ostringstream s;
  auto n = [&](double v) { return format_number(v, digits); };
  s << "{\"t\":" << n(e.t()) << ",\"phi\":" << n(e.phi()) << ",\"area\":" << n(e.area())
    << ",\"form\":[[" << n(q(0, 0)) << ',' << n(q(0, 1)) << "],[" << n(q(1, 0)) << ','
    << n(q(1, 1)) << "]]}";
  return s.str();
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                int digits) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*g", digits, row[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mie
