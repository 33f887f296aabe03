#include "app.hpp"

#include "mdgice/riemann_oracle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace mdg::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string basis_name(BasisFamily b) { return b == BasisFamily::P ? "P" : "Q"; }

void write_profiles(std::ostream& os, const ProblemSpec& spec, const SlabOutcome& slab) {
    const bool euler = spec.system.kind() == SystemKind::euler;
    const Basis& basis = slab.assembly->basis();
    const SlabMesh mesh = slab.final_mesh();
    const DgSolution sol = slab.solution();
    const int npts = basis.degree() + 1;
    const State ref = spec.left_state();
    os << (euler ? "element,point,x,t,density,velocity,pressure,entropy_production\n" : "element,point,x,t,u\n");
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const QuadGeometry geo = mesh.geometry(e);
        for (int k = 0; k < npts; ++k) {
            const double xi = npts == 1 ? 0.0 : -1.0 + 2.0 * k / (npts - 1);
            const Point p = geo.map(xi, 1.0);
            const State s = eval_solution(basis, sol, e, xi, 1.0);
            os << e << ',' << k << ',' << num(p.x) << ',' << num(p.t);
            if (euler) {
                const double rho = s[0];
                const double v = rho != 0.0 ? s[1] / rho : NAN;
                const double pr = pressure(spec.system, s);
                const auto ds = entropy_production(spec.system, s, ref);
                os << ',' << num(rho) << ',' << num(v) << ',' << num(pr) << ',' << num(ds ? *ds : NAN);
            } else {
                os << ',' << num(s[0]);
            }
            os << '\n';
        }
    }
}

void write_history(std::ostream& os, const RunOutcome& run) {
    os << "iter,norm_dg,norm_ice,lambda,step_norm,slab,round,negative_density,negative_pressure\n";
    for (const auto& l : run.log)
        os << l.record.iter << ',' << num(l.record.norm_primary) << ',' << num(l.record.norm_secondary) << ','
           << num(l.record.lambda) << ',' << num(l.record.step_norm) << ',' << l.slab << ',' << l.round << ','
           << l.negative_density << ',' << l.negative_pressure << '\n';
}

void write_log(std::ostream& os, const ProblemSpec& spec, const RunOutcome& run) {
    os << "# mdgice run " << timestamp() << " wall_seconds=" << num(run.wall_seconds) << '\n';
    os << "problem " << spec.name << " degree " << spec.degree << " basis " << basis_name(spec.basis) << " init "
       << to_string(spec.init) << " slabs " << spec.slabs << '\n';
    for (std::size_t k = 0; k < run.slabs.size(); ++k) {
        const auto& s = run.slabs[k];
        os << "slab " << k << ": " << to_string(s.report.reason) << " after " << s.iterations
           << " iterations, |R| = " << num(s.report.residual_norm) << '\n';
    }
    for (const auto& r : run.removals) {
        os << "removal slab " << r.slab << " round " << r.round << " iteration " << r.iteration << ": ";
        if (r.elements.empty()) {
            os << r.note << '\n';
            continue;
        }
        os << r.elements.size() << " cell(s) [";
        for (std::size_t i = 0; i < r.elements.size(); ++i) os << (i ? " " : "") << r.elements[i];
        os << "]";
        if (!r.note.empty()) os << " " << r.note;
        os << '\n';
    }
    for (const auto& l : run.log)
        if (l.negative_density > 0 || l.negative_pressure > 0)
            os << "sign slab " << l.slab << " round " << l.round << " iter " << l.record.iter
               << ": negative_density=" << l.negative_density << " negative_pressure=" << l.negative_pressure
               << '\n';
    os << "negative_density_events " << run.negative_density_events() << '\n';
    os << "negative_pressure_events " << run.negative_pressure_events() << '\n';
    os << "converged " << (run.converged ? "yes" : "no") << '\n';
}

std::vector<std::pair<std::string, Field>> error_fields(const ProblemSpec& spec) {
    if (spec.system.kind() != SystemKind::euler) return {{"u", Field::component0}};
    return {{"density", Field::density},
            {"velocity", Field::velocity},
            {"pressure", Field::pressure},
            {"internal_energy", Field::internal_energy}};
}

nlohmann::json make_summary(const ProblemSpec& spec, const RunOutcome& run, long dofs,
                            const std::vector<FieldErrors>& errors) {
    using nlohmann::json;
    const SlabOutcome& last = run.last();
    json j;
    j["problem"] = spec.name;
    j["system"] = spec.system.describe();
    j["degree"] = spec.degree;
    j["basis"] = basis_name(spec.basis);
    j["init"] = to_string(spec.init);
    j["slabs"] = spec.slabs;
    j["mesh_management"] = spec.mesh_management;
    j["converged"] = run.converged;
    j["termination"] = to_string(last.report.reason);
    j["iterations"] = run.iterations;
    j["residual"] = {{"total", last.report.residual_norm},
                     {"dg", last.report.norm_primary},
                     {"ice", last.report.norm_secondary}};
    j["dofs"] = dofs;
    j["elements"] = last.final_mesh().num_elements();
    j["removed_cells"] = run.removed_cells();
    j["negative_density_events"] = run.negative_density_events();
    j["negative_pressure_events"] = run.negative_pressure_events();
    json top = json::array();
    const SlabMesh mesh = last.final_mesh();
    for (int id : mesh.top_ids()) top.push_back(mesh.node(id).x);
    j["top_nodes"] = top;
    json errs = json::object();
    for (const auto& e : errors) errs[e.field] = {{"l2", e.l2}, {"log10", std::log10(e.l2)}};
    j["errors"] = errs;
    const State balance = last.assembly->boundary_flux_balance(last.unknowns);
    json bal = json::array();
    for (int c = 0; c < balance.size(); ++c) bal.push_back(balance[c]);
    j["flux_balance"] = bal;
    return j;
}

}  // namespace

ProblemSpec resolve_spec(const std::string& problem, const std::string& config, const Overrides& o) {
    ProblemSpec spec = config.empty() ? load_problem(problem) : load_problem(config);
    if (o.degree) spec.degree = *o.degree;
    if (o.max_iter) spec.lm.max_iter = *o.max_iter;
    if (o.tol) spec.lm.tol_residual = *o.tol;
    if (o.slabs) spec.slabs = *o.slabs;
    if (o.basis) spec.basis = *o.basis;
    if (o.init) spec.init = *o.init;
    if (o.no_mesh_management) spec.mesh_management = false;
    spec.validate();
    return spec;
}

long count_dofs(const RunOutcome& run) {
    long n = 0;
    for (const auto& s : run.slabs) n += s.assembly->layout().size();
    return n;
}

std::vector<FieldErrors> compute_errors(const ProblemSpec& spec, const RunOutcome& run) {
    std::unique_ptr<Oracle> oracle;
    try {
        oracle = make_oracle(spec);
    } catch (const std::exception&) {
        return {};
    }
    if (!oracle) return {};
    std::vector<FieldErrors> out;
    for (const auto& [name, field] : error_fields(spec)) {
        double sum = 0.0;
        for (const auto& s : run.slabs) {
            const double e = l2_spacetime_error(spec.system, s.assembly->basis(), s.final_mesh(), s.solution(),
                                                *oracle, field);
            sum += e * e;
        }
        out.push_back({name, std::sqrt(sum)});
    }
    return out;
}

RunReport run_to_directory(const ProblemSpec& spec, const fs::path& dir) {
    RunReport rep;
    rep.spec = spec;
    rep.outcome = run_problem(spec);
    rep.dofs = count_dofs(rep.outcome);
    rep.errors = compute_errors(spec, rep.outcome);
    rep.summary = make_summary(spec, rep.outcome, rep.dofs, rep.errors);

    fs::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("config.txt");
        write_config(f, spec);
    }
    {
        auto f = open("mesh_initial.txt");
        rep.outcome.slabs.front().initial_mesh.write(f);
    }
    {
        auto f = open("mesh_final.txt");
        rep.outcome.last().final_mesh().write(f);
    }
    {
        auto f = open("profiles.csv");
        write_profiles(f, spec, rep.outcome.last());
    }
    {
        auto f = open("history.csv");
        write_history(f, rep.outcome);
    }
    {
        auto f = open("summary.json");
        f << rep.summary.dump(2) << '\n';
    }
    {
        auto f = open("run.log");
        write_log(f, spec, rep.outcome);
    }
    return rep;
}

fs::path default_directory(const std::string& leaf) {
    const char* root = std::getenv(output_root_env);
    return fs::path(root && *root ? root : "runs") / leaf;
}

void fill_slopes(std::vector<StudyRow>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].slope.reset();
        if (i == 0) continue;
        const double dx = rows[i].log_inv_sqrt_dofs - rows[i - 1].log_inv_sqrt_dofs;
        if (dx != 0.0) rows[i].slope = (rows[i].log_error - rows[i - 1].log_error) / dx;
    }
}

std::vector<StudyRow> run_study(const ProblemSpec& base, const std::vector<int>& degrees, const fs::path& dir) {
    std::vector<StudyRow> rows;
    for (int p : degrees) {
        ProblemSpec spec = base;
        spec.degree = p;
        const RunReport rep = run_to_directory(spec, dir / ("p" + std::to_string(p)));
        StudyRow row;
        row.degree = p;
        row.dofs = rep.dofs;
        row.log_inv_sqrt_dofs = std::log10(1.0 / std::sqrt(static_cast<double>(rep.dofs)));
        row.log_error = rep.errors.empty() ? NAN : std::log10(rep.errors.front().l2);
        row.converged = rep.outcome.converged;
        rows.push_back(row);
    }
    fill_slopes(rows);
    fs::create_directories(dir);
    std::ofstream f(dir / "study.csv");
    f << "degree,dofs,log_inv_sqrt_dofs,log_error,slope,converged\n";
    for (const auto& r : rows)
        f << r.degree << ',' << r.dofs << ',' << num(r.log_inv_sqrt_dofs) << ',' << num(r.log_error) << ','
          << (r.slope ? num(*r.slope) : "") << ',' << (r.converged ? "yes" : "no") << '\n';
    return rows;
}

namespace {

void add_common(CLI::App* cmd, std::string& problem, std::string& config, std::string& out, Overrides& o,
                std::string& basis, std::string& init, int& max_iter, double& tol, int& slabs) {
    cmd->add_option("--problem", problem, "builtin problem name or config file path")->required();
    cmd->add_option("--config", config, "config file replacing the problem definition");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--max-iter", max_iter, "Levenberg-Marquardt iteration cap")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tol", tol, "residual norm tolerance")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-mesh-management", o.no_mesh_management, "keep collapsed cells");
    cmd->add_option("--multi-slab", slabs, "number of time slabs")->check(CLI::PositiveNumber);
    cmd->add_option("--basis", basis, "polynomial space")->check(CLI::IsMember({"P", "Q"}));
    cmd->add_option("--init", init, "starting guess")->check(CLI::IsMember({"piecewise", "exact"}));
}

void finish_overrides(Overrides& o, const std::string& basis, const std::string& init, int max_iter, double tol,
                      int slabs) {
    if (!basis.empty()) o.basis = basis == "P" ? BasisFamily::P : BasisFamily::Q;
    if (!init.empty()) o.init = parse_init_mode(init);
    if (max_iter >= 0) o.max_iter = max_iter;
    if (tol > 0.0) o.tol = tol;
    if (slabs > 0) o.slabs = slabs;
}

void print_run(const RunReport& rep, const fs::path& dir) {
    const auto& s = rep.summary;
    std::cout << "problem " << rep.spec.name << "  p=" << rep.spec.degree << "  "
              << (rep.outcome.converged ? "converged" : "NOT converged") << " (" << s["termination"].get<std::string>()
              << ", " << rep.outcome.iterations << " iterations)\n";
    std::cout << "  |R| = " << num(s["residual"]["total"]) << "  dofs = " << rep.dofs
              << "  removed cells = " << rep.outcome.removed_cells() << '\n';
    for (const auto& e : rep.errors)
        std::cout << "  log10 L2 " << e.field << " error = " << std::fixed << std::setprecision(4)
                  << std::log10(e.l2) << std::defaultfloat << '\n';
    std::cout << "  output: " << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving space-time discontinuous Galerkin solver with interface conservation"};
    app.require_subcommand(1);

    std::string problem, config, out, basis, init;
    Overrides o;
    int max_iter = -1, slabs = 0, degree = 1;
    double tol = 0.0;
    std::vector<int> degrees;

    CLI::App* run = app.add_subcommand("run", "solve one problem and write a run directory");
    add_common(run, problem, config, out, o, basis, init, max_iter, tol, slabs);
    run->add_option("--p", degree, "polynomial degree")->check(CLI::Range(1, 3));

    CLI::App* study = app.add_subcommand("study", "p-convergence table over several degrees");
    add_common(study, problem, config, out, o, basis, init, max_iter, tol, slabs);
    study->add_option("--p", degrees, "polynomial degrees")->delimiter(',')->required()->check(CLI::Range(1, 3));

    app.add_subcommand("list", "print the builtin problem names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_converged : exit_usage;
    }

    try {
        if (app.got_subcommand("list")) {
            for (const auto& n : builtin_names()) std::cout << n << '\n';
            return exit_converged;
        }
        finish_overrides(o, basis, init, max_iter, tol, slabs);
        if (app.got_subcommand("run")) {
            o.degree = degree;
            const ProblemSpec spec = resolve_spec(problem, config, o);
            const fs::path dir =
                out.empty() ? default_directory(spec.name + "_p" + std::to_string(spec.degree)) : fs::path(out);
            const RunReport rep = run_to_directory(spec, dir);
            print_run(rep, dir);
            return rep.outcome.converged ? exit_converged : exit_nonconverged;
        }
        if (degrees.empty()) throw std::invalid_argument("study needs at least one degree");
        const ProblemSpec spec = resolve_spec(problem, config, o);
        const fs::path dir = out.empty() ? default_directory(spec.name + "_study") : fs::path(out);
        const auto rows = run_study(spec, degrees, dir);
        bool all = true;
        std::cout << "degree  dofs  log10(1/sqrt(dofs))  log10(error)  slope\n";
        for (const auto& r : rows) {
            all = all && r.converged;
            std::cout << std::setw(6) << r.degree << std::setw(6) << r.dofs << std::fixed << std::setprecision(4)
                      << std::setw(21) << r.log_inv_sqrt_dofs << std::setw(14) << r.log_error << std::setw(7)
                      << (r.slope ? std::to_string(*r.slope).substr(0, 6) : std::string("")) << std::defaultfloat
                      << (r.converged ? "" : "  (not converged)") << '\n';
        }
        if (!all) std::cout << "table is partial: some runs did not converge\n";
        std::cout << "output: " << dir.string() << '\n';
        return all ? exit_converged : exit_nonconverged;
    } catch (const UnknownProblemError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_nonconverged;
    }
}

}  // namespace mdg::cli
