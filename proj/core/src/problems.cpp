#include "mdgice/problems.hpp"

#include "mdgice/riemann_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mdg {

std::string to_string(InitMode m) { return m == InitMode::exact ? "exact" : "piecewise"; }

InitMode parse_init_mode(const std::string& s) {
    if (s == "piecewise") return InitMode::piecewise;
    if (s == "exact") return InitMode::exact;
    throw std::invalid_argument("init must be piecewise or exact");
}

void ProblemSpec::validate() const {
    const int m = system.ncomp();
    if (static_cast<int>(left.size()) != m || static_cast<int>(right.size()) != m)
        throw std::invalid_argument("left/right states must have " + std::to_string(m) + " entries");
    for (double v : left)
        if (!std::isfinite(v)) throw std::invalid_argument("left state is not finite");
    for (double v : right)
        if (!std::isfinite(v)) throw std::invalid_argument("right state is not finite");
    if (!(x_lo < x_interface && x_interface < x_hi))
        throw std::invalid_argument("interface must lie strictly inside the domain");
    if (!(t_hi > t_lo)) throw std::invalid_argument("t_hi must exceed t_lo");
    if (fan < 0 || elements - fan < 2)
        throw std::invalid_argument("need at least one plain cell on each side of the fan");
    if (left_elements < 0 || left_elements > elements)
        throw std::invalid_argument("left_elements out of range");
    if (degree < 0 || degree > 3) throw std::invalid_argument("degree must be in 0..3");
    if (slabs < 1) throw std::invalid_argument("slabs must be positive");
    lm.validate();
}

State ProblemSpec::left_state() const {
    if (system.kind() == SystemKind::euler)
        return primitive_to_conservative(system, {left[0], left[1], left[2]});
    State s(1);
    s[0] = left[0];
    return s;
}

State ProblemSpec::right_state() const {
    if (system.kind() == SystemKind::euler)
        return primitive_to_conservative(system, {right[0], right[1], right[2]});
    State s(1);
    s[0] = right[0];
    return s;
}

std::vector<std::string> builtin_names() {
    return {"sod", "lax", "receding123", "noh", "lemma1_advection", "lemma2_burgers"};
}

ProblemSpec builtin(const std::string& name) {
    ProblemSpec s;
    s.name = name;
    if (name == "sod") {
        s.system = SystemDef::euler(1.4);
        s.left = {1.0, 0.0, 1.0};
        s.right = {0.125, 0.0, 0.1};
        s.t_hi = 0.2;
        s.elements = 8;
        s.fan = 6;
        s.left_elements = 7;
        s.lm.max_iter = 1000;
    } else if (name == "lax") {
        s.system = SystemDef::euler(1.4);
        s.left = {0.445, 0.698876404, 3.52773};
        s.right = {0.5, 0.0, 0.571};
        s.t_hi = 0.15;
        s.elements = 8;
        s.fan = 6;
        s.left_elements = 7;
        s.lm.max_iter = 1000;
    } else if (name == "receding123") {
        s.system = SystemDef::euler(1.4);
        s.left = {1.0, -2.0, 0.4};
        s.right = {1.0, 2.0, 0.4};
        s.t_hi = 0.15;
        s.elements = 16;
        s.fan = 14;
        s.left_elements = 8;
        s.degree = 2;
    } else if (name == "noh") {
        s.system = SystemDef::euler(5.0 / 3.0);
        s.left = {1.0, 1.0, 1e-6};
        s.right = {1.0, -1.0, 1e-6};
        s.t_hi = 1.0;
        s.elements = 4;
        s.fan = 2;
        s.left_elements = 2;
    } else if (name == "lemma1_advection") {
        s.system = SystemDef::advection(1.0);
        s.left = {1.0};
        s.right = {0.0};
        s.elements = 4;
        s.fan = 0;
        s.left_elements = 2;
    } else if (name == "lemma2_burgers") {
        s.system = SystemDef::burgers();
        s.left = {2.0};
        s.right = {0.0};
        s.elements = 4;
        s.fan = 0;
        s.left_elements = 2;
    } else {
        std::string list;
        for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
        throw UnknownProblemError("unknown problem '" + name + "'; available: " + list);
    }
    return s;
}

ProblemSpec load_problem(const std::string& name_or_path) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path);
    std::ifstream in(name_or_path);
    if (!in) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw UnknownProblemError("'" + name_or_path + "' is neither a builtin problem (" + list +
                                  ") nor a readable config file");
    }
    return read_config(in);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number for '" + key + "': " + v);
    }
    if (trim(v.substr(pos)) != "") throw std::invalid_argument("bad number for '" + key + "': " + v);
    return d;
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d)) throw std::invalid_argument("'" + key + "' must be an integer");
    return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("'" + key + "' must be true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::istringstream is(v);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(to_double(key, tok));
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

ProblemSpec read_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    ProblemSpec s;
    std::string system = "euler";
    double gamma = 1.4, speed = 1.0;
    for (const auto& [k, v] : kv) {
        if (k == "name") s.name = v;
        else if (k == "system") system = v;
        else if (k == "gamma") gamma = to_double(k, v);
        else if (k == "speed") speed = to_double(k, v);
        else if (k == "x_lo") s.x_lo = to_double(k, v);
        else if (k == "x_hi") s.x_hi = to_double(k, v);
        else if (k == "t_lo") s.t_lo = to_double(k, v);
        else if (k == "t_hi") s.t_hi = to_double(k, v);
        else if (k == "x_interface") s.x_interface = to_double(k, v);
        else if (k == "left") s.left = to_list(k, v);
        else if (k == "right") s.right = to_list(k, v);
        else if (k == "elements") s.elements = to_int(k, v);
        else if (k == "fan") s.fan = to_int(k, v);
        else if (k == "left_elements") s.left_elements = to_int(k, v);
        else if (k == "degree") s.degree = to_int(k, v);
        else if (k == "basis") {
            if (v == "P") s.basis = BasisFamily::P;
            else if (v == "Q") s.basis = BasisFamily::Q;
            else throw std::invalid_argument("basis must be P or Q");
        }
        else if (k == "slabs") s.slabs = to_int(k, v);
        else if (k == "mesh_management") s.mesh_management = to_bool(k, v);
        else if (k == "bottom_chain_ice") s.bottom_chain_ice = to_bool(k, v);
        else if (k == "init") s.init = parse_init_mode(v);
        else if (k == "lambda0") s.lm.lambda0 = to_double(k, v);
        else if (k == "lambda_up") s.lm.lambda_up = to_double(k, v);
        else if (k == "lambda_down") s.lm.lambda_down = to_double(k, v);
        else if (k == "tol_residual") s.lm.tol_residual = to_double(k, v);
        else if (k == "tol_step") s.lm.tol_step = to_double(k, v);
        else if (k == "max_iter") s.lm.max_iter = to_int(k, v);
        else if (k == "geometry_scale") s.lm.geometry_scale = to_double(k, v);
        else if (k == "diag_floor") s.lm.diag_floor = to_double(k, v);
        else if (k == "geometry_floor") s.lm.geometry_floor = to_double(k, v);
        else throw std::invalid_argument("unknown config key '" + k + "'");
    }
    if (system == "euler") s.system = SystemDef::euler(gamma);
    else if (system == "burgers") s.system = SystemDef::burgers();
    else if (system == "advection") s.system = SystemDef::advection(speed);
    else throw std::invalid_argument("system must be advection, burgers or euler");
    s.validate();
    return s;
}

void write_config(std::ostream& os, const ProblemSpec& s) {
    auto list = [](const std::vector<double>& v) {
        std::string out;
        for (double d : v) out += (out.empty() ? "" : " ") + fmt(d);
        return out;
    };
    os << "name = " << s.name << '\n';
    switch (s.system.kind()) {
        case SystemKind::euler: os << "system = euler\ngamma = " << fmt(s.system.gamma()) << '\n'; break;
        case SystemKind::burgers: os << "system = burgers\n"; break;
        case SystemKind::advection:
            os << "system = advection\nspeed = " << fmt(s.system.advection_speed()) << '\n';
            break;
    }
    os << "x_lo = " << fmt(s.x_lo) << "\nx_hi = " << fmt(s.x_hi) << "\nt_lo = " << fmt(s.t_lo)
       << "\nt_hi = " << fmt(s.t_hi) << "\nx_interface = " << fmt(s.x_interface) << '\n';
    os << "left = " << list(s.left) << "\nright = " << list(s.right) << '\n';
    os << "elements = " << s.elements << "\nfan = " << s.fan << "\nleft_elements = " << s.left_elements
       << '\n';
    os << "degree = " << s.degree << "\nbasis = " << (s.basis == BasisFamily::P ? "P" : "Q")
       << "\nslabs = " << s.slabs << "\nmesh_management = " << (s.mesh_management ? "true" : "false")
       << "\nbottom_chain_ice = " << (s.bottom_chain_ice ? "true" : "false")
       << "\ninit = " << to_string(s.init) << '\n';
    os << "lambda0 = " << fmt(s.lm.lambda0) << "\nlambda_up = " << fmt(s.lm.lambda_up)
       << "\nlambda_down = " << fmt(s.lm.lambda_down) << "\ntol_residual = " << fmt(s.lm.tol_residual)
       << "\ntol_step = " << fmt(s.lm.tol_step) << "\nmax_iter = " << s.lm.max_iter
       << "\ngeometry_scale = " << fmt(s.lm.geometry_scale) << "\ndiag_floor = " << fmt(s.lm.diag_floor)
       << "\ngeometry_floor = " << fmt(s.lm.geometry_floor) << '\n';
}

SlabMesh build_mesh(const ProblemSpec& spec) {
    spec.validate();
    const int plain = spec.elements - spec.fan;
    const int nl = (plain + 1) / 2;
    const int nr = plain - nl;
    std::vector<double> x;
    for (int i = 0; i <= nl; ++i) x.push_back(spec.x_lo + (spec.x_interface - spec.x_lo) * i / nl);
    x.back() = spec.x_interface;
    for (int i = 1; i <= nr; ++i) x.push_back(spec.x_interface + (spec.x_hi - spec.x_interface) * i / nr);
    x.back() = spec.x_hi;
    std::optional<FanSpec> fan;
    if (spec.fan > 0) fan = FanSpec{spec.x_interface, spec.fan};
    return SlabMesh::build(x, spec.t_lo, spec.t_hi, fan);
}

State initial_state(const ProblemSpec& spec, double x) {
    return x < spec.x_interface ? spec.left_state() : spec.right_state();
}

PastTrace initial_trace(const ProblemSpec& spec) {
    const State l = spec.left_state();
    const State r = spec.right_state();
    const double xi = spec.x_interface;
    return [l, r, xi](int, double, double x) { return x < xi ? l : r; };
}

Eigen::VectorXd initialize_unknowns(const ProblemSpec& spec, const SpaceTimeResidual& assembly) {
    const UnknownLayout& lay = assembly.layout();
    DgSolution sol(lay.nelem, lay.nbasis, lay.ncomp);
    // The first basis function is the constant 1/2 (orthonormal on the square).
    const double b0 = assembly.basis().eval(0.0, 0.0)[0];
    const State l = spec.left_state();
    const State r = spec.right_state();
    for (int e = 0; e < lay.nelem; ++e) {
        const State& s = e < spec.left_elements ? l : r;
        for (int c = 0; c < lay.ncomp; ++c) sol(e, 0, c) = s[c] / b0;
    }
    return assembly.pack(sol);
}

std::vector<double> fitted_top_nodes(double x_lo, double x_hi, int ntop, const std::vector<WaveFeature>& waves) {
    struct Slot {
        double lo, hi;
        int interior;
    };
    std::vector<Slot> slots;
    int required = 0;
    for (const auto& w : waves) {
        const double lo = std::clamp(w.lo, x_lo, x_hi);
        const double hi = std::clamp(w.hi, x_lo, x_hi);
        if (lo <= x_lo || hi >= x_hi) continue;
        slots.push_back({lo, hi, 0});
        required += hi > lo ? 2 : 1;
    }
    const int nint = ntop - 2;
    if (nint < required) return {};
    int extra = nint - required;
    std::vector<int> fans;
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].hi > slots[i].lo) fans.push_back(static_cast<int>(i));
    for (int k = 0; !fans.empty() && k < extra; ++k) ++slots[fans[k % fans.size()]].interior;
    if (!fans.empty()) extra = 0;

    std::vector<double> x{x_lo};
    for (const auto& s : slots) {
        x.push_back(s.lo);
        if (s.hi > s.lo) {
            for (int j = 1; j <= s.interior; ++j) x.push_back(s.lo + (s.hi - s.lo) * j / (s.interior + 1));
            x.push_back(s.hi);
        }
    }
    x.push_back(x_hi);
    for (; extra > 0; --extra) {
        std::size_t widest = 0;
        for (std::size_t i = 1; i + 1 < x.size(); ++i)
            if (x[i + 1] - x[i] > x[widest + 1] - x[widest]) widest = i;
        x.insert(x.begin() + static_cast<long>(widest) + 1, 0.5 * (x[widest] + x[widest + 1]));
    }
    std::sort(x.begin(), x.end());
    return x;
}

Eigen::VectorXd initialize_from_oracle(const ProblemSpec& spec, const SpaceTimeResidual& assembly,
                                       const Oracle& oracle) {
    SlabMesh mesh = assembly.mesh();
    const auto& top = mesh.top_ids();
    const auto x = fitted_top_nodes(spec.x_lo, spec.x_hi, static_cast<int>(top.size()), oracle.waves(spec.t_hi));
    if (!x.empty())
        for (std::size_t i = 1; i + 1 < top.size(); ++i) mesh.set_x(top[i], x[i]);

    const UnknownLayout& lay = assembly.layout();
    const Basis& basis = assembly.basis();
    DgSolution sol(lay.nelem, lay.nbasis, lay.ncomp);
    const double t_floor = spec.t_lo + 1e-12 * (spec.t_hi - spec.t_lo);
    for (int e = 0; e < lay.nelem; ++e) {
        const QuadGeometry geo = mesh.geometry(e);
        const auto c = project_reference(basis, lay.ncomp, [&](double xi, double eta) {
            const Point p = geo.map(xi, eta);
            return oracle.conservative(p.x, std::max(p.t, t_floor));
        });
        for (int i = 0; i < lay.nbasis; ++i)
            for (int k = 0; k < lay.ncomp; ++k) sol(e, i, k) = c[i * lay.ncomp + k];
    }
    return assembly.pack(sol, mesh);
}

Eigen::VectorXd initial_guess(const ProblemSpec& spec, const SpaceTimeResidual& assembly) {
    if (spec.init == InitMode::exact) {
        const auto oracle = make_oracle(spec);
        if (!oracle) throw std::invalid_argument("init = exact needs a reference solution for '" + spec.name + "'");
        return initialize_from_oracle(spec, assembly, *oracle);
    }
    return initialize_unknowns(spec, assembly);
}

std::vector<double> field_scales(const ProblemSpec& spec) {
    const State l = spec.left_state();
    const State r = spec.right_state();
    std::vector<double> out(l.size());
    double biggest = 0.0;
    for (int c = 0; c < l.size(); ++c) {
        out[c] = std::max(std::abs(l[c]), std::abs(r[c]));
        biggest = std::max(biggest, out[c]);
    }
    if (biggest == 0.0) biggest = 1.0;
    for (double& v : out) v = std::max(v, 1e-2 * biggest);
    return out;
}

Eigen::VectorXd dof_scaling(const ProblemSpec& spec, const UnknownLayout& lay) {
    const auto scales = field_scales(spec);
    Eigen::VectorXd d(lay.size());
    for (int e = 0; e < lay.nelem; ++e)
        for (int i = 0; i < lay.nbasis; ++i)
            for (int c = 0; c < lay.ncomp; ++c) d[lay.flow(e, i, c)] = scales[c];
    for (int k = 0; k < lay.nmovable; ++k) d[lay.geometry(k)] = spec.lm.geometry_scale * (spec.x_hi - spec.x_lo);
    return d;
}

std::unique_ptr<Oracle> make_oracle(const ProblemSpec& spec) {
    switch (spec.system.kind()) {
        case SystemKind::advection:
            return std::make_unique<ScalarRiemannOracle>(ScalarKind::advection, spec.left[0], spec.right[0],
                                                         spec.system.advection_speed(), spec.x_interface);
        case SystemKind::burgers:
            return std::make_unique<ScalarRiemannOracle>(ScalarKind::burgers, spec.left[0], spec.right[0], 0.0,
                                                         spec.x_interface);
        case SystemKind::euler: break;
    }
    const Primitive l{spec.left[0], spec.left[1], spec.left[2]};
    const Primitive r{spec.right[0], spec.right[1], spec.right[2]};
    if (spec.name == "noh") {
        NohSolution noh;
        noh.gamma = spec.system.gamma();
        noh.rho0 = l.rho;
        noh.u0 = l.v;
        noh.p0 = l.p;
        return std::make_unique<NohOracle>(noh);
    }
    return std::make_unique<EulerRiemannOracle>(spec.system, solve_euler_riemann(l, r, spec.system.gamma()),
                                                spec.x_interface, spec.t_lo);
}

}  // namespace mdg
