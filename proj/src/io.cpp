#include "qplus/io.hpp"

#include "qplus/version.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace qplus {

namespace {

long long parse_int(const std::string& s, Errc code, const std::string& what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(code, what + ": '" + s + "' is not an integer");
  return v;
}

std::vector<Fel> parse_csv(const std::string& s, Errc code, const std::string& what) {
  std::vector<Fel> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ','))
    out.push_back((Fel)parse_int(item, code, what));
  if (s.empty() || s.back() == ',')
    throw Error(code, what + ": trailing comma in '" + s + "'");
  return out;
}

}  // namespace

PointSetFile parse_point_set(std::istream& in) {
  PointSetFile ps;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first);
    if (!have_header) {
      // q=<q> rank=<r> modulus=<c0,c1,...>
      std::stringstream ss(line);
      std::string tok;
      bool q_seen = false, r_seen = false, m_seen = false;
      while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
          throw Error(Errc::MalformedHeader, "header token '" + tok + "' has no '='");
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "q") {
          ps.q = parse_int(val, Errc::MalformedHeader, "header q");
          q_seen = true;
        } else if (key == "rank") {
          ps.rank = (int)parse_int(val, Errc::MalformedHeader, "header rank");
          r_seen = true;
        } else if (key == "modulus") {
          ps.modulus = parse_csv(val, Errc::MalformedHeader, "header modulus");
          m_seen = true;
        } else {
          throw Error(Errc::MalformedHeader, "unknown header key '" + key + "'");
        }
      }
      if (!q_seen || !r_seen || !m_seen)
        throw Error(Errc::MalformedHeader, "header needs q=, rank= and modulus=");
      have_header = true;
      continue;
    }
    PointSetFile::Entry e;
    if (line.rfind("idx:", 0) == 0) {
      e.is_index = true;
      e.index = parse_int(line.substr(4), Errc::BadInput, "point index");
    } else {
      e.coords = parse_csv(line, Errc::BadInput, "point coordinates");
    }
    ps.entries.push_back(std::move(e));
  }
  if (!have_header) throw Error(Errc::MalformedHeader, "missing header line");
  return ps;
}

std::vector<int> resolve_point_set(const PointSetFile& ps, const HyperbolicQuadric& Q) {
  const FieldSpec& f = Q.field();
  if (ps.q != f.q || ps.rank != Q.rank())
    throw Error(Errc::ModulusMismatch, "file is for q=" + std::to_string(ps.q) + " rank=" +
                                           std::to_string(ps.rank) + ", quadric is q=" +
                                           std::to_string(f.q) + " rank=" +
                                           std::to_string(Q.rank()));
  if (ps.modulus != f.modulus)
    throw Error(Errc::ModulusMismatch, "modulus in file differs from the canonical modulus");
  std::vector<int> out;
  std::vector<bool> seen(Q.size(), false);
  for (const auto& e : ps.entries) {
    int idx;
    if (e.is_index) {
      if (e.index < 0 || e.index >= Q.size())
        throw Error(Errc::BadIndex, "idx:" + std::to_string(e.index) + " out of range");
      idx = (int)e.index;
    } else {
      if ((int)e.coords.size() != 2 * Q.rank())
        throw Error(Errc::BadInput, "point needs " + std::to_string(2 * Q.rank()) +
                                        " coordinates, got " + std::to_string(e.coords.size()));
      for (Fel c : e.coords)
        if (c < 0 || c >= f.q)
          throw Error(Errc::CoordinateOutOfRange,
                      "coordinate " + std::to_string(c) + " outside [0, " + std::to_string(f.q) +
                          ")");
      ProjectivePoint pt = normalize_point(e.coords, f);
      idx = Q.index_of(pt);
      if (idx < 0) throw Error(Errc::PointOffQuadric, "point is not on the quadric");
    }
    if (seen[idx])
      throw Error(Errc::DuplicatePoint, "point index " + std::to_string(idx) + " repeated");
    seen[idx] = true;
    out.push_back(idx);
  }
  return out;
}

void write_point_set(std::ostream& out, const HyperbolicQuadric& Q, const std::vector<int>& idx,
                     bool as_indices) {
  const FieldSpec& f = Q.field();
  out << "q=" << f.q << " rank=" << Q.rank() << " modulus=";
  for (size_t i = 0; i < f.modulus.size(); ++i) out << (i ? "," : "") << f.modulus[i];
  out << "\n";
  for (int i : idx) {
    if (as_indices) {
      out << "idx:" << i << "\n";
    } else {
      const auto& c = Q.point(i).coords;
      for (size_t t = 0; t < c.size(); ++t) out << (t ? "," : "") << c[t];
      out << "\n";
    }
  }
}

nlohmann::ordered_json report_envelope(const std::string& command, const FieldSpec& f, int rank) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["tool"] = "qplus";
  j["version"] = kVersion;
  j["command"] = command;
  j["q"] = f.q;
  j["rank"] = rank;
  j["modulus"] = f.modulus;
  return j;
}

}  // namespace qplus
