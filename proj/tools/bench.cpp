// Compares the OpenMP kernels against the serial reference path on the two
// data-parallel hot spots: snapshot construction (Hom table + catalog cones)
// and chart sampling (one deformation per sampled charge).

#include <chrono>
#include <cstdio>

#include "costab/demos.hpp"
#include "costab/par.hpp"

using namespace costab;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

double bench_build(bool parallel, Category* out) {
  par::set_enabled(parallel);
  BuildOptions bo;
  bo.width_bound = 3;
  bo.parallel = parallel;
  auto t0 = std::chrono::steady_clock::now();
  Category cat = build_category(make_dual_numbers(), bo);
  double ms = ms_since(t0);
  if (out) *out = std::move(cat);
  return ms;
}

double bench_chart(const Category& cat, bool parallel, int samples, ChartReport* out) {
  par::set_enabled(parallel);
  CoStabilityCondition c = dual_condition(cat.snapshot, {0.2, 1.1});
  Rng rng(7);
  auto t0 = std::chrono::steady_clock::now();
  ChartReport rep = chart_sample(*cat.engine, c, 0.05, samples, rng);
  double ms = ms_since(t0);
  if (out) *out = std::move(rep);
  return ms;
}

}  // namespace

int main(int argc, char** argv) {
  int samples = argc > 1 ? std::atoi(argv[1]) : 40;
  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial(ms)", "openmp(ms)", "speedup");

  Category cat_serial, cat_par;
  double b_s = bench_build(false, &cat_serial);
  double b_p = bench_build(true, &cat_par);
  bool same_build = cat_serial.snapshot.hom == cat_par.snapshot.hom &&
                    cat_serial.snapshot.catalog.size() == cat_par.snapshot.catalog.size();
  std::printf("%-28s %12.1f %12.1f %7.2fx  %s\n", "snapshot-build(dual,w=3)", b_s, b_p,
              b_s / b_p, same_build ? "" : "MISMATCH");

  ChartReport r_s, r_p;
  double c_s = bench_chart(cat_par, false, samples, &r_s);
  double c_p = bench_chart(cat_par, true, samples, &r_p);
  bool same_chart = r_s.samples.size() == r_p.samples.size();
  for (std::size_t i = 0; same_chart && i < r_s.samples.size(); ++i)
    same_chart = r_s.samples[i].w.on_basis == r_p.samples[i].w.on_basis &&
                 r_s.samples[i].distance == r_p.samples[i].distance;
  std::printf("%-28s %12.1f %12.1f %7.2fx  %s\n",
              ("chart-sample(" + std::to_string(samples) + ")").c_str(), c_s, c_p,
              c_s / c_p, same_chart ? "" : "MISMATCH");

  if (!same_build || !same_chart) {
    std::printf("parallel results diverge from the serial reference\n");
    return 1;
  }
  par::set_enabled(true);
  return 0;
}
