#include "commands.hpp"

#include <cmath>
#include <iostream>

#include "output.hpp"
#include "qmem/parallel.hpp"
#include "qmem_checks/acceptance.hpp"

namespace qmem::cli {

namespace {

Report quaternion_json(const HyperbolicQuaternion& r) { return Report::array({r.r0, r.r1, r.r2, r.r3}); }

Report spinor_json(const Spinor& s) {
  return Report::array({Report::array({s.z1.real(), s.z1.imag()}),
                        Report::array({s.z2.real(), s.z2.imag()})});
}

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::Even:
      return "even";
    case Parity::Odd:
      return "odd";
    case Parity::None:
      break;
  }
  return "none";
}

const Scenario& need_scenario(const RunContext& ctx) {
  if (!ctx.scenario) throw SchemaError("--scenario is required for this subcommand");
  return *ctx.scenario;
}

PipelineOptions pipeline_options(const RunContext& ctx) {
  PipelineOptions opt = need_scenario(ctx).pipeline;
  if (ctx.tol) opt.quadrature.abs_tol = *ctx.tol;
  opt.quadrature.threads = ctx.threads;
  opt.quadrature.strict = true;
  return opt;
}

Report quadrature_json(const QuadratureStats& s) {
  Report r;
  r["evaluations"] = s.evaluations;
  r["levels"] = s.levels;
  r["last_change"] = s.last_change;
  r["converged"] = s.converged;
  return r;
}

Report impurity_json(const ImpurityReport& rep) {
  Report r;
  r["imp"] = rep.imp;
  r["imp_trace"] = rep.imp_trace;
  r["minkowski_norm"] = rep.minkowski_norm;
  r["min_eigenvalue"] = rep.min_eigenvalue;
  r["physical"] = rep.physical;
  r["energy"] = rep.energy;
  r["normalization"] = rep.normalization == Normalization::UnitTrace ? "unit-trace" : "raw";
  r["m_in"] = quaternion_json(rep.m_out - rep.delta_m);
  r["delta_m"] = quaternion_json(rep.delta_m);
  r["m_out"] = quaternion_json(rep.m_out);
  r["m_normalized"] = quaternion_json(rep.m_normalized);
  return r;
}

Report header(const RunContext& ctx, const char* command) {
  Report r;
  r["command"] = command;
  r["scenario"] = ctx.scenario ? ctx.scenario->source.filename().string() : std::string();
  return r;
}

void write_report(const RunContext& ctx, const std::string& stem, const Report& report) {
  if (ctx.format == Format::Json) {
    write_file(ctx.out, stem + ".json", to_json_text(report));
  } else {
    write_file(ctx.out, stem + ".csv", to_csv_text(report));
  }
}

void note(const RunContext& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n';
}

void add_block(std::vector<double>& row, const Matrix2c& m) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      row.push_back(m(i, j).real());
      row.push_back(m(i, j).imag());
    }
  }
}

void add_spinor(std::vector<double>& row, const Spinor& s) {
  row.insert(row.end(), {s.z1.real(), s.z1.imag(), s.z2.real(), s.z2.imag()});
}

std::vector<std::string> block_header(const std::string& name) {
  std::vector<std::string> h;
  for (const char* e : {"11", "12", "21", "22"}) {
    h.push_back(name + "_" + e + "_re");
    h.push_back(name + "_" + e + "_im");
  }
  return h;
}

}  // namespace

int run_solve(const RunContext& ctx) {
  const Scenario& s = need_scenario(ctx);
  const std::vector<double> omega = s.require_grid("solve").nodes();
  const SolveOptions solve = s.pipeline.solve;

  if (s.potential.type == PotentialType::PointOdd) {
    const IncomingState& in = s.require_incoming("solve for the odd channel");
    const PointInteraction pi = s.potential.point();
    std::vector<OddChannelSolution> sol(omega.size());
    parallel_for(omega.size(), ctx.threads, [&](std::size_t k) {
      sol[k] = odd_channel_solution(pi, boundary_coefficients(in, omega[k]).d_minus_right, omega[k]);
    });
    CsvTable table({"omega", "d_a1_re", "d_a1_im", "d_a2_re", "d_a2_im", "phi_x0_1_re",
                    "phi_x0_1_im", "phi_x0_2_re", "phi_x0_2_im"});
    for (const auto& so : sol) {
      std::vector<double> row{so.omega};
      add_spinor(row, so.d_a);
      add_spinor(row, so.phi_x0);
      table.add(row);
    }
    write_file(ctx.out, s.outputs.solution, table.text());
    note(ctx, "wrote " + s.outputs.solution + " (" + std::to_string(omega.size()) + " frequencies)");
    return kOk;
  }

  const DiscretePotential pot = s.potential.chain();
  std::vector<ScatteringMatrix> sm(omega.size());
  parallel_for(omega.size(), ctx.threads,
               [&](std::size_t k) { sm[k] = scattering_matrix(pot, omega[k], solve); });
  std::vector<std::string> head{"omega"};
  for (const char* name : {"T_left", "R_left", "T_right", "R_right"}) {
    const auto h = block_header(name);
    head.insert(head.end(), h.begin(), h.end());
  }
  CsvTable scattering(head);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    std::vector<double> row{omega[k]};
    add_block(row, sm[k].transmission_left);
    add_block(row, sm[k].reflection_left);
    add_block(row, sm[k].transmission_right);
    add_block(row, sm[k].reflection_right);
    scattering.add(row);
  }
  write_file(ctx.out, s.outputs.scattering, scattering.text());
  note(ctx, "wrote " + s.outputs.scattering);

  if (s.incoming) {
    std::vector<FrequencySolution> sol(omega.size());
    parallel_for(omega.size(), ctx.threads, [&](std::size_t k) {
      const auto bc = boundary_coefficients(*s.incoming, omega[k]);
      sol[k] = solve_frequency(pot, bc.d_plus_left, bc.d_minus_right, omega[k], solve);
    });
    std::vector<std::string> cols{"omega", "site", "x"};
    for (const char* b : {"dp1", "dp2", "dm1", "dm2", "phi1", "phi2"}) {
      cols.push_back(std::string(b) + "_re");
      cols.push_back(std::string(b) + "_im");
    }
    cols.insert(cols.end(), {"r0", "r1", "r2", "r3"});
    CsvTable table(cols);
    for (const auto& so : sol) {
      for (std::size_t j = 0; j < pot.size(); ++j) {
        std::vector<double> row{so.omega, static_cast<double>(j), pot.sites()[j].x};
        for (int c = 0; c < 4; ++c) row.insert(row.end(), {so.d[j](c).real(), so.d[j](c).imag()});
        add_spinor(row, so.phi[j]);
        const HyperbolicQuaternion r = scattered_density(so, j);
        row.insert(row.end(), {r.r0, r.r1, r.r2, r.r3});
        table.add(row);
      }
    }
    write_file(ctx.out, s.outputs.solution, table.text());
    note(ctx, "wrote " + s.outputs.solution);
  }
  return kOk;
}

int run_impurity(const RunContext& ctx) {
  const Scenario& s = need_scenario(ctx);
  const IncomingState& in = s.require_incoming("impurity");
  const PipelineOptions opt = pipeline_options(ctx);
  const ImpurityReport rep = s.potential.is_point()
                                 ? impurity_point(s.potential.point(), in, opt)
                                 : impurity_pipeline(s.potential.chain(), in, opt);
  Report r = header(ctx, "impurity");
  r["parity"] = parity_name(in.parity);
  r["s_in"] = spinor_json(in.s_in);
  r.update(impurity_json(rep));
  r["quadrature"] = quadrature_json(rep.quadrature);
  write_report(ctx, s.outputs.impurity, r);
  note(ctx, "imp = " + format_double(rep.imp));
  return kOk;
}

int run_analytic(const RunContext& ctx) {
  const Scenario& s = need_scenario(ctx);
  const IncomingState& in = s.require_incoming("analytic");
  const PointInteraction pi = s.potential.point();
  const PipelineOptions opt = pipeline_options(ctx);

  const HyperbolicQuaternion t = t_in(in.s_in);
  const double energy = incoming_energy(in, opt.quadrature);
  const HyperbolicQuaternion min = m_in(in, opt.quadrature);
  const DeltaMResult closed = delta_m_closed(pi, in.spectrum, t, opt.quadrature);
  const DeltaMResult route = delta_m_commutator_route(pi, in.spectrum, t, opt.quadrature);
  ImpurityReport closed_rep = impurity(m_out(min, closed.delta_m), energy);
  closed_rep.delta_m = closed.delta_m;
  const ImpurityReport route_rep = impurity(m_out(min, route.delta_m), energy);
  const double disagreement = std::abs(closed_rep.imp - route_rep.imp);

  Report r = header(ctx, "analytic");
  r["parity"] = parity_name(in.parity);
  r["s_in"] = spinor_json(in.s_in);
  r.update(impurity_json(closed_rep));
  r["imp_commutator_route"] = route_rep.imp;
  r["route_disagreement"] = disagreement;
  r["quadrature"] = quadrature_json(closed.stats);
  if (in.spectrum.kind() == Spectrum::Kind::Rectangular) {
    const auto& rect = in.spectrum.rectangular_pulse();
    const double formula = rectangular_impurity(pi, rect.omega0, rect.K);
    constexpr double kCalibration = 0.5;
    Report f;
    const MagnitudePhase lo = magnitude_phase(pi, rect.omega0);
    const MagnitudePhase hi = magnitude_phase(pi, rect.K * rect.omega0);
    f["theta1"] = lo.theta;
    f["theta2"] = hi.theta;
    f["imp_formula"] = formula;
    f["calibration"] = kCalibration;
    f["imp_formula_calibrated"] = kCalibration * formula;
    f["formula_vs_closed"] = std::abs(kCalibration * formula - closed_rep.imp);
    if (pi.parity == Parity::Even) {
      f["small_bandwidth_asymptotic"] =
          small_bandwidth_asymptotic(pi, rect.omega0, (rect.K - 1.0) * rect.omega0);
    }
    r["rectangular"] = f;
  }
  write_report(ctx, s.outputs.analytic, r);
  note(ctx, "imp = " + format_double(closed_rep.imp) + " (commutator route " +
                format_double(route_rep.imp) + ")");
  if (!(disagreement <= s.consistency_tol)) {
    note(ctx, "closed and commutator routes differ by " + format_double(disagreement));
    return kTolerance;
  }
  return kOk;
}

int run_evolve(const RunContext& ctx) {
  const Scenario& s = need_scenario(ctx);
  s.require_incoming("evolve");
  const UniformGrid grid = UniformGrid::symmetric(s.time.half_width, s.time.nodes);
  DiscretePotential local;
  std::optional<NonlocalSeparable> nonlocal;
  if (s.potential.type == PotentialType::NonlocalSeparable) {
    NonlocalSeparable nl;
    nl.q = s.potential.q;
    nl.V_alpha.resize(grid.n);
    nl.V_beta.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
      nl.V_alpha[i] = s.potential.alpha.truncated(grid.x(i));
      nl.V_beta[i] = s.potential.beta.truncated(grid.x(i));
    }
    nonlocal = std::move(nl);
  } else {
    local = s.potential.chain();
  }

  const ScatteringRun run =
      run_scattering(synthesize_packet(grid, s.time.packet), local, nonlocal, s.time.run);

  CsvTable series({"t", "trace", "m0", "m1", "m2", "m3", "imp"});
  for (const auto& p : run.series) series.add({p.t, p.trace, p.m.r0, p.m.r1, p.m.r2, p.m.r3, p.imp});
  write_file(ctx.out, s.outputs.time_series, series.text());

  Report r = header(ctx, "evolve");
  r["parity"] = parity_name(s.time.packet.parity);
  r["nodes"] = grid.n;
  r["dx"] = grid.dx;
  r["dt"] = s.time.run.dt;
  r["steps"] = run.steps;
  r["t_final"] = run.final_field.t;
  r["stopped"] = run.stopped;
  r["norm_drift"] = run.norm_drift;
  r["trace_m0_drift"] = run.trace_m0_drift;
  r["max_edge_ratio"] = run.max_edge_ratio;
  ImpurityReport final_report = run.report;
  final_report.delta_m = run.final.m - run.initial.m;
  r.update(impurity_json(final_report));
  if (!nonlocal) {
    // Narrow the truncation window when k0 - span sigma_k would reach k = 0.
    GaussianPulse pulse = matching_pulse(s.time.packet);
    pulse.span = std::min(pulse.span, 0.99 * pulse.k0 / pulse.sigma_k);
    r["frequency_span"] = pulse.span;
    const IncomingState freq_state(Spectrum::gaussian(pulse),
                                   s.time.packet.s_in, s.time.packet.parity);
    const ImpurityReport freq = impurity_pipeline(local, freq_state, pipeline_options(ctx));
    r["imp_frequency"] = freq.imp;
    r["time_frequency_difference"] = std::abs(freq.imp - run.report.imp);
  }
  write_report(ctx, s.outputs.evolve, r);
  note(ctx, "imp = " + format_double(run.report.imp) + " after " + std::to_string(run.steps) +
                " steps");
  return run.stopped ? kOk : kTolerance;
}

int run_optimize(const RunContext& ctx) {
  const Scenario& s = need_scenario(ctx);
  const IncomingState& in = s.require_incoming("optimize");
  const std::vector<double> omega = s.require_grid("optimize").nodes();
  const DiscretePotential pot = s.potential.chain();

  ModelOptions mopt;
  mopt.parity = in.parity;
  mopt.rule = s.optimizer.rule;
  mopt.solve = s.pipeline.solve;
  mopt.threads = ctx.threads;
  const QuadraticModel model = build_model(pot, in.s_in, omega, mopt);

  std::vector<double> start(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) {
    switch (s.optimizer.initial) {
      case InitialWeights::Rectangular:
        start[k] = std::pow(omega[k], -1.5);
        break;
      case InitialWeights::Uniform:
        start[k] = 1.0;
        break;
      case InitialWeights::Spectrum:
        start[k] = in.spectrum.density(omega[k]);
        break;
    }
  }
  const double e0 = model.energy_of(start);
  if (!(e0 > 0.0)) throw SchemaError("optimizer.initial: initial spectrum has no energy on the grid");
  for (double& w : start) w /= e0;

  const OptimizationResult res = minimize(model, start, s.optimizer.options);

  CsvTable spectrum({"omega", "density", "energy_share", "initial_density"});
  for (std::size_t k = 0; k < omega.size(); ++k) {
    spectrum.add({omega[k], res.weights[k], model.energy[k] * res.weights[k], start[k]});
  }
  write_file(ctx.out, s.outputs.optimal_spectrum, spectrum.text());
  CsvTable conv({"iteration", "objective", "imp", "step"});
  for (const auto& it : res.trace) conv.add({static_cast<double>(it.iteration), it.objective, it.imp, it.step});
  write_file(ctx.out, s.outputs.convergence, conv.text());

  const HyperbolicQuaternion m = model.m_out(res.weights);
  Report r = header(ctx, "optimize");
  r["parity"] = parity_name(in.parity);
  r["nodes"] = omega.size();
  r["imp_initial"] = model.normalized_impurity(start);
  r["imp"] = res.imp;
  r["objective"] = res.objective;
  r["iterations"] = res.iterations;
  r["converged"] = res.converged;
  r["monotone"] = res.monotone;
  r["energy"] = model.energy_of(res.weights);
  r["m_out"] = quaternion_json(m);
  r["physical"] = minkowski(m, m) <= 1e-8 * m.r0 * m.r0;
  write_report(ctx, s.outputs.optimize, r);
  note(ctx, "imp " + format_double(r["imp_initial"].get<double>()) + " -> " +
                format_double(res.imp) + " in " + std::to_string(res.iterations) + " iterations");
  return res.converged ? kOk : kTolerance;
}

int run_selftest(const RunContext& ctx) {
  checks::AcceptanceOptions opt;
  opt.threads = ctx.threads;
  if (ctx.scenario) opt.seed = ctx.scenario->seed;
  const auto results = checks::run_acceptance(opt);
  int failed = 0;
  std::ostream& out = ctx.log ? *ctx.log : std::cout;
  for (const auto& r : results) {
    out << checks::format_line(r) << '\n';
    if (!r.pass) ++failed;
  }
  out << results.size() << " criteria, " << failed << " failed\n";
  return failed == 0 ? kOk : kTolerance;
}

}  // namespace qmem::cli
