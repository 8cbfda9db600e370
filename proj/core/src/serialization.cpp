#include "suris/serialization.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "suris/errors.hpp"
#include "suris/version.hpp"

namespace suris {

namespace {

using Json = nlohmann::json;

void require_keys(const Json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known)
      throw DomainError(std::string("potential JSON: unknown key '") + item.key() +
                        "' in " + where);
  }
}

std::vector<double> number_array(const Json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  const Json& arr = obj.at(key);
  if (!arr.is_array())
    throw DomainError(std::string("potential JSON: '") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const Json& v : arr) {
    if (!v.is_number())
      throw DomainError(std::string("potential JSON: '") + key +
                        "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double number_field(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number())
    throw DomainError(std::string("potential JSON: '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::string potential_to_json(const Potential& v) {
  const auto parts = v.canonical_parts();
  if (!parts)
    throw DomainError("potential_to_json: " + v.describe() +
                      " does not flatten to a suris+trig document");
  Json doc = Json::object();
  if (parts->suris) {
    doc["suris"] = {{"A", parts->suris->A},
                    {"B", parts->suris->B},
                    {"C", parts->suris->C},
                    {"D", parts->suris->D}};
  }
  if (!parts->trig.is_zero()) {
    Json t = Json::object();
    t["cos"] = parts->trig.cos_coeffs;
    t["sin"] = parts->trig.sin_coeffs;
    if (parts->trig.mean != 0.0) t["mean"] = parts->trig.mean;
    doc["trig"] = t;
  }
  return doc.dump(2) + "\n";
}

Potential potential_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("potential JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw DomainError("potential JSON: top level must be an object");
  require_keys(doc, {"suris", "trig"}, "the top-level object");

  Potential out = Potential::zero();
  bool have_part = false;
  if (doc.contains("suris")) {
    const Json& s = doc.at("suris");
    if (!s.is_object())
      throw DomainError("potential JSON: 'suris' must be an object");
    require_keys(s, {"A", "B", "C", "D"}, "'suris'");
    const SurisParams p(number_field(s, "A", 0.0), number_field(s, "B", 0.0),
                        number_field(s, "C", 0.0), number_field(s, "D", 0.0));
    out = Potential::suris(p);
    have_part = true;
  }
  if (doc.contains("trig")) {
    const Json& t = doc.at("trig");
    if (!t.is_object())
      throw DomainError("potential JSON: 'trig' must be an object");
    require_keys(t, {"cos", "sin", "mean"}, "'trig'");
    TrigPerturbation w;
    w.cos_coeffs = number_array(t, "cos");
    w.sin_coeffs = number_array(t, "sin");
    w.mean = number_field(t, "mean", 0.0);
    Potential tw = Potential::trig(std::move(w));
    out = have_part ? Potential::sum(std::move(out), std::move(tw)) : std::move(tw);
  }
  return out;
}

Potential load_potential(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open potential file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    throw std::runtime_error("read failed for potential file: " + path);
  try {
    return potential_from_json(buf.str());
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::string report_to_json(const EstimateReport& rep) {
  Json doc;
  doc["tool_version"] = kToolVersion;
  doc["id"] = rep.id;
  doc["sweep"] = rep.sweep;
  doc["measured"] = rep.measured;
  doc["fit"] = {{"constant", rep.fitted_constant},
                {"exponent", rep.fitted_exponent},
                {"r_squared", rep.r_squared}};
  doc["tolerance"] = rep.tolerance;
  doc["pass"] = rep.pass;
  doc["config"] = rep.config;
  return doc.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);  // inf/nan fall through
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::string tmpl = (dir / (target.filename().string() + ".XXXXXX")).string();
  std::vector<char> name(tmpl.begin(), tmpl.end());
  name.push_back('\0');

  const int fd = ::mkstemp(name.data());
  if (fd < 0)
    throw std::runtime_error("cannot create temporary file near: " + path);
  const std::string tmp_path(name.data());

  bool ok = true;
  std::size_t off = 0;
  while (ok && off < text.size()) {
    const ssize_t n = ::write(fd, text.data() + off, text.size() - off);
    if (n < 0)
      ok = false;
    else
      off += static_cast<std::size_t>(n);
  }
  if (ok && ::fsync(fd) != 0) ok = false;
  if (::close(fd) != 0) ok = false;
  if (!ok) {
    ::unlink(tmp_path.c_str());
    throw std::runtime_error("write failed for: " + path);
  }

  std::error_code ec;
  fs::rename(tmp_path, target, ec);
  if (ec) {
    ::unlink(tmp_path.c_str());
    throw std::runtime_error("rename failed for: " + path + ": " + ec.message());
  }
}

}  // namespace suris
