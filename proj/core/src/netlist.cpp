#include "ots/netlist.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ots/error.hpp"

namespace ots {

namespace {

// Boltzmann constant over elementary charge (exact SI values), and the
// SPICE nominal temperature 27 C.
constexpr double kBoltzmannOverQ = 1.380649e-23 / 1.602176634e-19;
constexpr double kTnomKelvin = 300.15;

const std::array<const char*, 5> kInternalNodes = {"ots_a", "ots_n1", "ots_n2",
                                                   "ots_n3", "ots_z"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

bool is_valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char ch : s)
    if (!std::isalnum(ch) && ch != '_') return false;
  return true;
}

std::string export_subckt(const ModelParams& p, const NetlistOptions& opts) {
  validate(p);
  for (const std::string* id : {&opts.subckt_name, &opts.anode, &opts.cathode})
    if (!is_valid_identifier(*id))
      throw DomainError("invalid netlist identifier '" + *id + "'");
  if (opts.anode == opts.cathode)
    throw DomainError("anode and cathode must be distinct nodes");
  for (const char* node : kInternalNodes)
    if (opts.anode == node || opts.cathode == node)
      throw DomainError(std::string("node name '") + node + "' is reserved");

  if (!std::isfinite(p.v_th))
    throw DomainError("netlist export needs a finite v_th");

  const double alpha_f = alpha_from_beta(p.beta_F);
  const double emission = p.V_T / (kBoltzmannOverQ * kTnomKelvin);
  const double c_outer = p.cap_junction ? p.cap_junction->Cj0 : p.C;
  const std::string& an = opts.anode;
  const std::string& ca = opts.cathode;
  const std::string a = kInternalNodes[0], n1 = kInternalNodes[1],
                    n2 = kInternalNodes[2], n3 = kInternalNodes[3],
                    nz = kInternalNodes[4];

  auto transit = [&](std::size_t k) {
    if (!p.cap_diffusion || k >= p.cap_diffusion->tau_j.size()) return std::string();
    return " TT=" + num(p.cap_diffusion->tau_j[k]);
  };

  std::ostringstream o;
  o << "* OTS compact delay model, equivalent circuit\n"
    << "* Rb is in series at " << an << "; the device sits between " << a
    << " and " << ca << ".\n"
    << "* Js: series junction " << a << " -> " << n1 << " (vs ~ 0).\n"
    << "* Jp: parallel junction, reversed across the device (vp = -v).\n"
    << "* J1: " << n1 << " -> " << n2 << ", J2: " << n2 << " -> " << n3
    << " (drop -vR), J3: " << n3 << " -> " << ca << "; v1 = v3.\n"
    << "* Each Jk source injects alpha*I_J(vk) against its diode.\n";
  if (opts.include_delay_circuit)
    o << "* Delay branch: V(" << nz << "," << ca
      << ") is the internal state zeta; vR = K*zeta with K = " << num(p.K) << ".\n";
  o << ".subckt " << opts.subckt_name << ' ' << an << ' ' << ca << '\n';
  o << ".model DJF D(IS=" << num(p.Is / alpha_f) << " N=" << num(emission) << ")\n";
  o << ".model DJR D(IS=" << num(p.Is / p.alpha_R) << " N=" << num(emission)
    << transit(1) << ")\n";
  if (p.cap_diffusion && !p.cap_diffusion->tau_j.empty())
    o << ".model DJT D(IS=" << num(p.Is / alpha_f) << " N=" << num(emission)
      << transit(0) << ")\n";
  const char* outer_model = (p.cap_diffusion && !p.cap_diffusion->tau_j.empty()) ? "DJT" : "DJF";

  o << "RB " << an << ' ' << a << ' ' << num(p.Rb) << '\n';

  o << "DJS " << a << ' ' << n1 << " DJF\n";
  o << "CJS " << a << ' ' << n1 << ' ' << num(c_outer) << '\n';

  o << "DJP " << ca << ' ' << a << " DJF\n";
  o << "CJP " << ca << ' ' << a << ' ' << num(c_outer) << '\n';

  auto junction = [&](const std::string& tag, const std::string& pos,
                      const std::string& neg, const char* model, double cap,
                      double alpha) {
    o << "DJ" << tag << ' ' << pos << ' ' << neg << ' ' << model << '\n';
    o << "CJ" << tag << ' ' << pos << ' ' << neg << ' ' << num(cap) << '\n';
    // alpha * (Is/alpha) * (exp(v/V_T) - 1)
    o << "BJ" << tag << ' ' << neg << ' ' << pos << " I=" << num(alpha) << "*"
      << num(p.Is / alpha) << "*(exp(V(" << pos << "," << neg << ")/" << num(p.V_T)
      << ")-1)\n";
  };
  junction("1", n1, n2, outer_model, c_outer, alpha_f);
  junction("2", n2, n3, "DJR", p.C, p.alpha_R);
  junction("3", n3, ca, outer_model, c_outer, alpha_f);

  if (opts.include_delay_circuit) {
    o << "RDLY " << nz << ' ' << ca << ' ' << num(p.R2) << '\n';
    o << "CDLY " << nz << ' ' << ca << ' ' << num(p.C2) << '\n';
    o << "BSTATE " << ca << ' ' << nz << " I=" << num(p.I_state) << "*u(V(" << a
      << "," << ca << ")-" << num(p.v_th) << ")\n";
  }
  o << ".ends " << opts.subckt_name << '\n';
  return o.str();
}

}  // namespace ots
