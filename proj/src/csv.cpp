#include "pbe/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pbe {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string density_filename(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "density_t%g.csv", t);
  return buf;
}

void write_density_csv(const std::string& path, const State& s) {
  auto out = open_out(path);
  out << "x_center,dx,c\n";
  const Mesh& mesh = *s.mesh;
  for (int i = 0; i < mesh.n_cells(); ++i)
    out << format_g17(mesh.center(i)) << ',' << format_g17(mesh.width(i))
        << ',' << format_g17(s.c[i]) << '\n';
}

void write_moments_csv(const std::string& path, const MomentSeries& series) {
  auto out = open_out(path);
  out << "t,mu0,mu1,mu2,leakage\n";
  for (std::size_t k = 0; k < series.t.size(); ++k)
    out << format_g17(series.t[k]) << ',' << format_g17(series.mu0[k]) << ','
        << format_g17(series.mu1[k]) << ',' << format_g17(series.mu2[k]) << ','
        << format_g17(series.leakage[k]) << '\n';
}

void write_eoc_csv(const std::string& path, const EOCReport& rep) {
  auto out = open_out(path);
  out << "cells,N,error,eoc\n";
  for (std::size_t k = 0; k < rep.grids.size(); ++k) {
    out << rep.grids[k] << ',' << format_g17(rep.N[k]) << ',';
    if (!std::isnan(rep.error[k])) out << format_g17(rep.error[k]);
    out << ',';
    if (!std::isnan(rep.eoc[k])) out << format_g17(rep.eoc[k]);
    out << '\n';
  }
}

void write_eoc_json(const std::string& path, const EOCReport& rep) {
  nlohmann::ordered_json j;
  j["config_fingerprint"] = rep.fingerprint;
  j["grids"] = rep.grids;
  j["N"] = rep.N;
  auto optional_array = [](const std::vector<double>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double x : v) {
      if (std::isnan(x))
        arr.push_back(nullptr);
      else
        arr.push_back(x);
    }
    return arr;
  };
  j["error"] = optional_array(rep.error);
  j["eoc"] = optional_array(rep.eoc);
  j["converged_below_resolution"] = rep.converged_below_resolution;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace pbe
