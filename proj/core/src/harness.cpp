#include "csflock/harness.hpp"

#include <iomanip>
#include <sstream>

#include "csflock/errors.hpp"

namespace csflock::harness {

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::ostringstream out;
    for (std::size_t k = 0; k < items.size(); ++k) out << (k ? sep : "") << items[k];
    return out.str();
}

std::ostream& full_precision(std::ostream& out) {
    out << std::setprecision(17);
    return out;
}

double vhat_inf(const dynamics::ReferenceState& ref) {
    return ref.vhat.size() ? ref.vhat.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

UniformSource::UniformSource(std::uint64_t seed) : engine_(seed) {}

double UniformSource::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

dynamics::FlockState initial_state(const ExperimentConfig& config) {
    const auto n = static_cast<Eigen::Index>(config.params.n);
    const auto d = static_cast<Eigen::Index>(config.params.d);
    dynamics::FlockState s;
    if (const auto* e = std::get_if<ExplicitInit>(&config.init)) {
        s.x = e->x;
        s.v = e->v;
        if (s.x.rows() != n || s.x.cols() != d || s.v.rows() != n || s.v.cols() != d)
            throw DimensionError("explicit initial state does not match N and d");
        return s;
    }
    const auto& r = std::get<RandomInit>(config.init);
    UniformSource rng(r.seed);
    s.x.resize(n, d);
    s.v.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < d; ++c) s.x(i, c) = r.position_interval * rng.next();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < d; ++c) s.v(i, c) = r.velocity_interval * rng.next();
    return s;
}

std::vector<std::string> certificate_blockers(const ExperimentConfig& config) {
    std::vector<std::string> out;
    const auto& sig = config.signal;
    for (auto idx : sig.used_indices()) {
        const auto info = topology::is_rooted_leadership(sig.graphs()[idx]);
        if (!info.valid)
            out.push_back("graph `" + sig.ids()[idx] + "` is not a rooted-leadership graph: " +
                          info.diagnostic);
    }
    if (!config.params.certifiable_step()) {
        std::ostringstream msg;
        msg << "time step h=" << config.params.h << " is not below 1/(N+1)="
            << 1.0 / (static_cast<double>(config.params.n) + 1.0);
        out.push_back(msg.str());
    }
    return out;
}

RunResult run(const ExperimentConfig& config) {
    dynamics::validate(config.params);
    if (config.signal.agent_count() != config.params.n)
        throw DimensionError("signal graphs do not have N vertices");
    if (config.steps == 0) throw InvariantError("steps must be at least 1");

    RunResult res;
    auto blockers = certificate_blockers(config);
    if (!blockers.empty()) {
        if (config.mode == Mode::Certificate)
            throw RefusedError("certificate mode refused:\n  " + join(blockers, "\n  ") +
                               "\n(set `mode = exploration` to simulate anyway)");
        res.warnings = std::move(blockers);
    }

    res.trajectory.reserve(config.steps + 1);
    res.trajectory.push_back(initial_state(config));
    for (std::uint64_t t = 0; t < config.steps; ++t) {
        res.active_graph.push_back(config.signal.index_at(t));
        res.trajectory.push_back(
            dynamics::step(res.trajectory.back(), config.signal.at(t), config.params));
    }
    res.active_graph.push_back(config.signal.index_at(config.steps));

    res.reference.reserve(res.trajectory.size());
    for (const auto& s : res.trajectory) res.reference.push_back(dynamics::reference(s));
    res.decay = theory::measured_decay(res.reference);
    for (std::size_t t = 0; t < res.decay.vhat_inf_series.size(); ++t)
        if (res.decay.vhat_inf_series[t] < config.threshold) {
            res.time_to_alignment = t;
            break;
        }

    res.certificate_inputs = theory::inputs_from_state(res.trajectory.front(), config.params, config.lambda);
    if (res.warnings.empty()) res.certificate = theory::certify(res.certificate_inputs);
    return res;
}

std::vector<SweepRow> dwell_sweep(const ExperimentConfig& base, std::span<const std::uint64_t> dwells) {
    std::vector<SweepRow> rows;
    for (auto dwell : dwells) {
        if (dwell == 0) throw InvariantError("dwell values must be at least one step");
        ExperimentConfig cfg = base;
        cfg.signal = base.signal.with_dwell(dwell);
        const RunResult res = run(cfg);

        SweepRow row;
        row.dwell = dwell;
        const auto& v_final = res.trajectory.back().v;
        const auto& v_init = res.trajectory.front().v;
        row.asymptotic_velocity = v_final.colwise().mean();
        for (Eigen::Index i = 0; i < v_init.rows(); ++i)
            row.distance_from_initial.push_back((row.asymptotic_velocity - v_init.row(i)).norm());
        row.time_to_alignment = res.time_to_alignment;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_trajectory_csv(std::ostream& out, const ExperimentConfig& config, const RunResult& result) {
    const std::size_t n = config.params.n;
    const std::size_t d = config.params.d;
    out << 't';
    for (const char* var : {"x", "v"})
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t c = 1; c <= d; ++c) out << ',' << var << '_' << i << '_' << c;
    out << ",xhat_norm,vhat_inf,graph\n";

    full_precision(out);
    for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
        const auto& s = result.trajectory[k];
        out << s.t;
        for (const auto* m : {&s.x, &s.v})
            for (Eigen::Index i = 0; i < m->rows(); ++i)
                for (Eigen::Index c = 0; c < m->cols(); ++c) out << ',' << (*m)(i, c);
        out << ',' << result.reference[k].xhat.norm() << ',' << vhat_inf(result.reference[k]) << ','
            << config.signal.ids()[result.active_graph[k]] << '\n';
    }
}

void write_metrics(std::ostream& out, const ExperimentConfig& config, const RunResult& result) {
    full_precision(out);
    const auto& dec = result.decay;
    out << "steps = " << config.steps << '\n';
    out << "sup_xhat = " << dec.sup_xhat << '\n';
    out << "final_xhat_norm = " << result.reference.back().xhat.norm() << '\n';
    out << "final_vhat_inf = " << dec.vhat_inf_series.back() << '\n';
    out << "final_vhat_norm = " << result.reference.back().vhat.norm() << '\n';
    out << "exact_consensus = " << (dec.exact_consensus ? "true" : "false") << '\n';
    if (dec.rate_available)
        out << "fitted_rate = " << dec.fitted_rate << '\n';
    else
        out << "fitted_rate = none\n";
    out << "threshold = " << config.threshold << '\n';
    if (result.time_to_alignment)
        out << "time_to_alignment = " << *result.time_to_alignment << '\n';
    else
        out << "time_to_alignment = none\n";
    for (const auto& w : result.warnings) out << "warning = " << w << '\n';
}

void write_certificate(std::ostream& out, const theory::CertificateInputs& inputs,
                       const theory::CertificateReport& report, std::optional<bool> empirically_aligned) {
    full_precision(out);
    out << "case = " << theory::to_string(report.which) << '\n';
    out << "hypothesis_holds = " << (report.hypothesis_holds ? "true" : "false") << '\n';
    out << "status = " << (report.hypothesis_holds ? "certified" : "not-certified") << '\n';
    if (empirically_aligned)
        out << "empirical = " << (*empirically_aligned ? "aligned" : "not-aligned") << '\n';
    out << "h = " << inputs.params.h << '\n';
    out << "beta = " << inputs.params.beta << '\n';
    out << "N = " << inputs.params.n << '\n';
    out << "d = " << inputs.params.d << '\n';
    out << "x0_hat_norm = " << inputs.x0_hat_norm << '\n';
    out << "v0_norm = " << inputs.v0_norm << '\n';
    out << "v0_inf_norm = " << inputs.v0_inf_norm << '\n';
    out << "lambda = " << report.lambda << '\n';
    out << "block_length = " << report.block << '\n';
    out << "a = " << report.a << '\n';
    out << "b = " << report.b << '\n';
    out << "s = " << report.s << '\n';
    out << "hypothesis_lhs = " << report.hypothesis_lhs << '\n';
    out << "hypothesis_rhs = " << report.hypothesis_rhs << '\n';
    if (report.B0) {
        out << "B0 = " << *report.B0 << '\n';
        out << "B0_source = proof-extracted\n";
        out << "R = " << *report.R << '\n';
        out << "decay_base = " << *report.decay_base << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& config, std::span<const SweepRow> rows) {
    out << "dwell";
    for (std::size_t c = 1; c <= config.params.d; ++c) out << ",vinf_" << c;
    for (std::size_t i = 1; i <= config.params.n; ++i) out << ",dist_" << i;
    out << ",time_to_alignment\n";
    full_precision(out);
    for (const auto& r : rows) {
        out << r.dwell;
        for (Eigen::Index c = 0; c < r.asymptotic_velocity.size(); ++c) out << ',' << r.asymptotic_velocity(c);
        for (double dist : r.distance_from_initial) out << ',' << dist;
        out << ',';
        if (r.time_to_alignment)
            out << *r.time_to_alignment;
        else
            out << "none";
        out << '\n';
    }
}

}  // namespace csflock::harness
