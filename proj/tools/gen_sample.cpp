// Regenerates data/sample.iv.csv: a noisy synthetic measurement from a
// device slightly off the reference parameters.
#include <iostream>
#include <vector>

#include "ots/fit.hpp"
#include "ots/io.hpp"

int main() {
  ots::ModelParams device = ots::table1_params();
  device.Is = 2e-14;
  device.K = 0.65;
  device.V_T = 0.0262;

  std::vector<double> grid;
  for (int k = 0; k < 120; ++k) grid.push_back(0.05 + 0.025 * k);

  ots::IVCurve c = ots::synth_curve(device, grid, 0.05, 7);
  c.meta.source = "sample";
  c.meta.normalized = true;
  std::cout << ots::write_curve_csv(c);
}
