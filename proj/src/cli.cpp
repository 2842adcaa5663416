#include "renormlab/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>

#include "renormlab/attractor.hpp"
#include "renormlab/io.hpp"

namespace renormlab::cli {

namespace {

using io::json;

json ivl(const Interval& I) { return json::array({I.lo, I.hi}); }

json type_json(MonotoneType t) { return {{"a", t.a}, {"b", t.b}, {"word", io::type_word(t)}}; }

json report_json(const Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}, {"claim", c.claim}});
    return {{"checks", checks}, {"all_pass", r.all_pass()}};
}

json return_structure_json(const ReturnStructure& rs) {
    json cu = json::array(), cvj = json::array();
    for (const auto& I : rs.cycles_u) cu.push_back(ivl(I));
    for (const auto& I : rs.cycles_v) cvj.push_back(ivl(I));
    return {{"a", rs.a}, {"b", rs.b}, {"p", rs.p}, {"q", rs.q}, {"C", ivl(rs.C)}, {"L", ivl(rs.L)}, {"R", ivl(rs.R)},
            {"U", ivl(rs.U)}, {"V", ivl(rs.V)}, {"cycles_u", cu}, {"cycles_v", cvj},
            {"return_left", rs.return_left}, {"return_right", rs.return_right},
            {"multiplier_p", rs.multiplier_p}, {"multiplier_q", rs.multiplier_q}, {"period_error", rs.period_error}};
}

json matrix_json(const std::array<Vec2, 2>& M) { return json::array({json::array({M[0][0], M[0][1]}), json::array({M[1][0], M[1][1]})}); }

Vec2 parse_pair(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw io::InputError("expected 'x,y', got '" + text + "'");
    Vec2 v{};
    std::string parts[2] = {text.substr(0, comma), text.substr(comma + 1)};
    for (int i = 0; i < 2; ++i) {
        const std::string& t = parts[i];
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v[i]);
        if (ec != std::errc{} || p != t.data() + t.size()) throw io::InputError("bad number '" + t + "'");
    }
    return v;
}

std::vector<WindingMatrix> parse_winding(const std::string& text, long& A1, long& B1) {
    std::vector<WindingMatrix> W;
    for (const auto& t : io::parse_types(text)) W.push_back(winding_closed_form(t));
    A1 = W.front()[1][0];
    B1 = W.front()[0][1];
    return W;
}

class CsvFile {
public:
    CsvFile(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw io::InputError("cannot write '" + path + "'");
        row_strings(header);
    }
    void row(const std::vector<double>& xs) {
        std::vector<std::string> s;
        for (double x : xs) s.push_back(io::number(x));
        row_strings(s);
    }
    void row_strings(const std::vector<std::string>& xs) {
        for (std::size_t i = 0; i < xs.size(); ++i) out_ << (i ? "," : "") << xs[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

double orbit_residual(const LorenzMap& f, int first, int steps) {
    double x = f.eval_branch(first, f.c());
    for (int k = 0; k < steps; ++k) x = f.eval_branch(x > f.c() ? 1 : 0, x);
    return std::abs(x - f.c());
}

struct Options {
    std::string map, slice, types, repeat, type, target = "0.75,0.75", csv, out, winding, curve;
    std::vector<double> xs;
    std::vector<int> search;
    std::vector<std::size_t> directions;
    int a = 0, b = 0, depth = 0, orbit = 0, samples = 64, pairs = 10000, b_lower = 0, threads = 0;
    double h = 1e-6, kappa = 1.0, tol = 1e-12, sigma = 0.5, beta = 0.05, theta = 1.0;
    bool no_prune = false, no_boxes = false;
};

Slice load_slice(const Options& o) {
    return o.slice.empty() ? Slice::identity(2.0, 0.5) : io::slice_from_json(io::load_json(o.slice));
}

std::vector<MonotoneType> type_list(const Options& o) {
    if (!o.types.empty()) return io::parse_types(o.types);
    if (!o.repeat.empty()) return io::parse_repeat(o.repeat);
    return {};
}

json cmd_eval(const Options& o) {
    LorenzMap f = io::map_from_json(io::load_json(o.map));
    json pts = json::array();
    std::unique_ptr<CsvFile> csv;
    if (!o.csv.empty()) csv = std::make_unique<CsvFile>(o.csv, std::vector<std::string>{"x", "f", "df"});
    for (double x : o.xs) {
        double y = f_eval(f, x), d = f_deriv(f, x);
        pts.push_back({{"x", x}, {"f", y}, {"df", d}});
        if (csv) csv->row({x, y, d});
    }
    json j{{"command", "eval"}, {"points", pts}};
    if (o.orbit > 0) {
        json orbits = json::array();
        for (double x : o.xs) {
            Orbit ob = orbit(f, x, o.orbit);
            orbits.push_back({{"x0", x}, {"points", ob.points}, {"word", ob.word}});
        }
        j["orbits"] = orbits;
    }
    return j;
}

json cmd_renorm(const Options& o) {
    LorenzMap f = io::map_from_json(io::load_json(o.map));
    json j{{"command", "renorm"}};
    int a = o.a, b = o.b;
    if (!o.search.empty()) {
        auto found = detect_search(f, o.search[0], o.search[1]);
        json list = json::array();
        for (auto [x, y] : found) list.push_back(type_json({x, y}));
        j["detected"] = list;
        if (found.empty()) throw Error(ErrorCode::NotNice, "no monotone type detected in the search range");
        a = found.front().first;
        b = found.front().second;
    } else if (a < 1 || b < 1) {
        throw io::InputError("renorm needs --a and --b or --search");
    }
    ReturnStructure rs = detect(f, a, b);
    LorenzMap g = renormalize(f, rs, !o.no_prune);
    j["type"] = type_json({a, b});
    j["return_structure"] = return_structure_json(rs);
    j["renormalized"] = io::map_to_json(g);
    j["report"] = report_json(verify_lemma_bounds(f, rs));
    return j;
}

json cmd_island(const Options& o) {
    Slice s = load_slice(o);
    MonotoneType w = io::parse_type(o.type);
    Vec2 target = parse_pair(o.target);
    if (!(target[0] > 0.5 && target[0] < 1.0 && target[1] > 0.5 && target[1] < 1.0))
        throw io::InputError("target must lie strictly inside [1/2,1]^2");
    SolveOptions opt;
    opt.tol = o.tol;
    IslandSolution sol = island_solve(s, w, target, opt);
    auto J = fd_jacobian2([&](const Vec2& l) { return R_map(s, l, w); }, sol.lambda, o.h);
    double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    json j{{"command", "island"}, {"type", type_json(w)}, {"target", target}, {"lambda", sol.lambda},
           {"value", sol.value}, {"residual", sol.residual}, {"iterations", sol.iterations},
           {"jacobian", matrix_json(J)}, {"det_jacobian", det}, {"map", io::map_to_json(s.at(sol.lambda))}};
    if (!o.curve.empty()) {
        if (o.curve != "left" && o.curve != "right") throw io::InputError("--curve must be left or right");
        if (o.csv.empty()) throw io::InputError("--curve needs --csv");
        CsvFile csv(o.csv, {"param", "u", "v", "residual"});
        int n = std::max(2, o.samples);
        int rows = 0;
        for (int k = 0; k < n; ++k) {
            double t = (k + 0.5) / n;
            try {
                if (o.curve == "left") {
                    double u = triv_left_curve(s, w.a, t);
                    csv.row({t, u, t, orbit_residual(s.at(u, t), 0, w.a)});
                } else {
                    double v = triv_right_curve(s, w.b, t);
                    csv.row({t, t, v, orbit_residual(s.at(t, v), 1, w.b)});
                }
                ++rows;
            } catch (const Error&) {
            }
        }
        j["curve"] = {{"name", o.curve}, {"rows", rows}, {"csv", o.csv}};
    }
    return j;
}

json cmd_cascade(const Options& o) {
    Slice s = load_slice(o);
    auto types = type_list(o);
    if (types.empty()) throw io::InputError("cascade needs --types or --repeat");
    CascadeResult cr = cascade(s, types, !o.no_boxes);
    json boxes = json::array();
    std::unique_ptr<CsvFile> csv;
    if (!o.csv.empty())
        csv = std::make_unique<CsvFile>(o.csv, std::vector<std::string>{"depth", "a", "b", "u_lo", "u_hi", "v_lo", "v_hi", "diameter"});
    for (const auto& bx : cr.boxes) {
        boxes.push_back({{"depth", bx.depth}, {"type", type_json(bx.type)}, {"lambda", bx.lambda},
                         {"u", json::array({bx.u_lo, bx.u_hi})}, {"v", json::array({bx.v_lo, bx.v_hi})},
                         {"diameter", bx.diameter()}});
        if (csv) csv->row({double(bx.depth), double(bx.type.a), double(bx.type.b), bx.u_lo, bx.u_hi, bx.v_lo, bx.v_hi, bx.diameter()});
    }
    bool nested = true;
    for (std::size_t k = 1; k < cr.boxes.size(); ++k) nested = nested && cr.boxes[k - 1].contains(cr.boxes[k]);
    LorenzMap f = cr.map_at(s);
    bool detect_ok = true;
    try {
        renormalize_n(f, types, types.size());
    } catch (const Error&) {
        detect_ok = false;
    }
    json j{{"command", "cascade"}, {"lambda", cr.lambda}, {"boxes", boxes}, {"diameter_ratios", cr.diameter_ratios},
           {"measured_boxes", !o.no_boxes}, {"nested", nested}, {"detect_all_types", detect_ok},
           {"map", io::map_to_json(f)}};
    return j;
}

json cmd_fixed_point(const Options& o) {
    Slice s = load_slice(o);
    MonotoneType w = io::parse_type(o.type);
    if (o.depth < 2) throw io::InputError("--depth must be >= 2");
    FixedPointApprox fp = fixed_point_approx(w, s, o.depth);
    return {{"command", "fixed-point"}, {"type", type_json(w)}, {"depth", o.depth}, {"residual", fp.residual},
            {"du", fp.du}, {"dv", fp.dv}, {"dc", fp.dc}, {"dmap", fp.dmap},
            {"map", io::map_to_json(fp.map)}, {"image", io::map_to_json(fp.image)}};
}

json cmd_jacobian(const Options& o) {
    LorenzMap f = io::map_from_json(io::load_json(o.map));
    MonotoneType w = io::parse_type(o.type);
    FDJacobian J = jacobian_fd(f, w, o.directions, o.h);
    json xs = json::array(), ys = json::array();
    for (const auto& c : J.x_columns) xs.push_back(c);
    for (const auto& c : J.y_columns) ys.push_back(c);
    return {{"command", "jacobian"}, {"type", type_json(w)}, {"h", J.h}, {"M1", matrix_json(J.M1)},
            {"M1_forward", matrix_json(J.M1_forward)}, {"M1_backward", matrix_json(J.M1_backward)},
            {"det_M1", J.det_M1}, {"du_dc", J.du_dc}, {"dv_dc", J.dv_dc}, {"dc_dc", J.dc_dc},
            {"sign_du_dc", J.du_dc < 0 ? -1 : 1}, {"sign_dv_dc", J.dv_dc < 0 ? -1 : 1},
            {"directions", J.directions}, {"x_columns", xs}, {"y_columns", ys}};
}

json cmd_cone(const Options& o) {
    LorenzMap f = io::map_from_json(io::load_json(o.map));
    MonotoneType w = io::parse_type(o.type);
    ConeReport r = cone_check(f, w, o.kappa, o.samples, o.h);
    return {{"command", "cone"}, {"type", type_json(w)}, {"kappa", r.kappa}, {"samples", r.samples},
            {"max_output_ratio", r.max_output_ratio}, {"min_expansion", r.min_expansion},
            {"x_axis_output_ratio", r.x_axis_output_ratio}, {"x_axis_expansion", r.x_axis_expansion},
            {"zero_maps_to_zero", r.zero_maps_to_zero}, {"into_cone", r.into_cone()}, {"expanding", r.expanding()}};
}

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::U: return "U";
        case NodeKind::V: return "V";
        case NodeKind::C: return "C";
        default: return "I";
    }
}

json cmd_attractor(const Options& o) {
    LorenzMap f = io::map_from_json(io::load_json(o.map));
    if (o.depth < 1) throw io::InputError("--depth must be >= 1");
    Covers cv = build_covers(f, o.depth, type_list(o));
    json levels = json::array();
    std::unique_ptr<CsvFile> csv;
    if (!o.csv.empty()) csv = std::make_unique<CsvFile>(o.csv, std::vector<std::string>{"n", "kind", "index", "lo", "hi", "parent"});
    for (const auto& lv : cv.levels) {
        auto mm = [](const std::vector<double>& v) {
            if (v.empty()) return json::array({nullptr, nullptr});
            auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            return json::array({*lo, *hi});
        };
        auto g = mm(lv.gap_ratios), r = mm(lv.interval_ratios);
        levels.push_back({{"n", lv.n}, {"count", lv.count()}, {"total_length", lv.total_length},
                          {"mean_length", lv.mean_length()}, {"min_gap_ratio", g[0]}, {"max_gap_ratio", g[1]},
                          {"min_interval_ratio", r[0]}, {"max_interval_ratio", r[1]}});
        if (csv)
            for (const auto& ci : lv.intervals)
                csv->row_strings({std::to_string(lv.n), kind_name(ci.kind), std::to_string(ci.index), io::number(ci.I.lo),
                                  io::number(ci.I.hi), std::to_string(ci.parent)});
    }
    json types = json::array();
    for (auto t : cv.types) types.push_back(type_json(t));
    WeakMarkovReport wm = weak_markov_check(cv);
    json ratios = json::array();
    for (auto r : wm.ratios) ratios.push_back(r);
    json j{{"command", "attractor"}, {"depth", o.depth}, {"types", types}, {"levels", levels},
           {"weak_markov", {{"delta", wm.delta}, {"ratios", ratios}, {"nested", wm.nested}, {"last_change", wm.last_change}}}};
    if (cv.levels.size() >= 3) {
        DimensionEstimate d = box_dimension_estimate(cv.levels);
        j["box_dimension"] = {{"estimate", d.dimension}, {"stderr", d.stderr_}, {"residual", d.residual},
                              {"ci", json::array({d.ci_lo, d.ci_hi})}};
    } else {
        j["box_dimension"] = nullptr;
    }
    return j;
}

json cmd_measure(const Options& o) {
    MeasureResult m;
    json j{{"command", "measure"}};
    if (!o.winding.empty()) {
        long A1 = 0, B1 = 0;
        auto W = parse_winding(o.winding, A1, B1);
        m = invariant_measure_from_winding(W, A1, B1);
        j["mode"] = "winding";
    } else {
        if (o.map.empty()) throw io::InputError("measure needs --map or --winding");
        if (o.depth < 2) throw io::InputError("--depth must be >= 2");
        LorenzMap f = io::map_from_json(io::load_json(o.map));
        m = invariant_measure(f, o.depth, type_list(o));
        j["mode"] = "map";
        j["weights"] = m.weights;
    }
    json table = json::array(), widths = json::array(), mats = json::array();
    for (std::size_t n = 0; n < m.W.size(); ++n) {
        const auto& W = m.W[n];
        mats.push_back(json::array({json::array({W[0][0], W[0][1]}), json::array({W[1][0], W[1][1]})}));
        table.push_back({{"level", n + 1}, {"a", W[1][0]}, {"b", W[0][1]}, {"k_bound", birkhoff_contraction(W)},
                         {"k_measured", measured_contraction(W, o.pairs)}});
    }
    for (const auto& w : m.widths)
        widths.push_back({{"matrices", w.matrices}, {"angular_width", w.angular_width}, {"ray_lo", w.ray_lo}, {"ray_hi", w.ray_hi}});
    j["winding_matrices"] = mats;
    j["contraction"] = table;
    j["cone_widths"] = widths;
    j["diagnosis"] = m.unique ? "unique (numerically)" : "two extremal measures";
    j["residual_width"] = m.widths.empty() ? 1.5707963267948966 : m.widths.back().angular_width;
    j["extreme_lo"] = m.extreme_lo;
    j["extreme_hi"] = m.extreme_hi;
    j["loop_masses"] = m.z;
    j["push_forward_error"] = m.push_forward_error;
    j["total_mass_error"] = m.total_mass_error;
    return j;
}

json cmd_verify(const Options& o) {
    LorenzMap f = io::map_from_json(io::load_json(o.map));
    MonotoneType w = io::parse_type(o.type);
    int bl = o.b_lower > 0 ? o.b_lower : w.b;
    ReturnStructure rs = detect(f, w.a, w.b);
    Report k = verify_K_membership(f, bl, o.sigma, o.beta, o.theta);
    Report l = verify_lemma_bounds(f, rs);
    return {{"command", "verify"}, {"type", type_json(w)}, {"b_lower", bl}, {"sigma", o.sigma}, {"beta", o.beta},
            {"theta", o.theta}, {"K_membership", report_json(k)}, {"lemma_bounds", report_json(l)}};
}

json error_json(const std::string& code, const std::string& message) {
    return {{"schema", 1}, {"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"renormlab: renormalization of Lorenz maps"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--threads", o.threads, "worker threads (sets RENORMLAB_THREADS)")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "write JSON here instead of stdout");

    auto map_opt = [&](CLI::App* s, bool required) {
        auto* op = s->add_option("--map", o.map, "map JSON file or inline {alpha,u,v,c,phi,psi}");
        if (required) op->required();
    };
    auto slice_opt = [&](CLI::App* s) { s->add_option("--slice", o.slice, "slice JSON {alpha,c,phi,psi}; default identity, alpha=2, c=1/2"); };
    auto type_opt = [&](CLI::App* s) { s->add_option("--type", o.type, "monotone type 'a,b' or '01,100'")->required(); };
    auto types_opts = [&](CLI::App* s) {
        auto* t = s->add_option("--types", o.types, "type list 'a0,b0;a1,b1;...'");
        s->add_option("--repeat", o.repeat, "repeated type 'a,bxN'")->excludes(t);
    };

    auto* eval = app.add_subcommand("eval", "evaluate f and Df at points");
    map_opt(eval, true);
    eval->add_option("--x", o.xs, "evaluation points")->required();
    eval->add_option("--orbit", o.orbit, "also report n iterates of each point");
    eval->add_option("--csv", o.csv, "CSV of x,f,df");

    auto* renorm = app.add_subcommand("renorm", "detect a monotone return structure and renormalize");
    map_opt(renorm, true);
    renorm->add_option("--a", o.a, "left return steps");
    renorm->add_option("--b", o.b, "right return steps");
    renorm->add_option("--search", o.search, "search a_max b_max")->expected(2);
    renorm->add_flag("--no-prune", o.no_prune, "keep identity pieces in the decompositions");

    auto* island = app.add_subcommand("island", "solve R_map(lambda) = target in a slice");
    slice_opt(island);
    type_opt(island);
    island->add_option("--target", o.target, "target 'x,y' inside [1/2,1]^2");
    island->add_option("--tol", o.tol, "residual tolerance");
    island->add_option("--step", o.h, "FD step for the orientation check");
    island->add_option("--curve", o.curve, "also sample a trivial boundary curve: left|right");
    island->add_option("--samples", o.samples, "curve samples");
    island->add_option("--csv", o.csv, "CSV of param,u,v,residual for --curve");

    auto* cas = app.add_subcommand("cascade", "nested islands for a type list");
    slice_opt(cas);
    types_opts(cas);
    cas->add_flag("--no-boxes", o.no_boxes, "skip boundary solves (parameter only)");
    cas->add_option("--csv", o.csv, "CSV of the boxes");

    auto* fp = app.add_subcommand("fixed-point", "mid-cascade approximation of the renormalization fixed point");
    slice_opt(fp);
    type_opt(fp);
    fp->add_option("--depth", o.depth, "cascade depth")->required();

    auto* jac = app.add_subcommand("jacobian", "finite-difference derivative of R");
    map_opt(jac, true);
    type_opt(jac);
    jac->add_option("--directions", o.directions, "decomposition piece indices (phi then psi)");
    jac->add_option("--step", o.h, "relative FD step");

    auto* cone = app.add_subcommand("cone", "cone-field and expansion diagnostic");
    map_opt(cone, true);
    type_opt(cone);
    cone->add_option("--kappa", o.kappa, "cone aperture");
    cone->add_option("--samples", o.samples, "tangent vectors");
    cone->add_option("--step", o.h, "relative FD step");

    auto* att = app.add_subcommand("attractor", "covers, gap statistics, box dimension, weak Markov report");
    map_opt(att, true);
    att->add_option("--depth", o.depth, "number of levels")->required();
    types_opts(att);
    att->add_option("--csv", o.csv, "CSV of cover intervals");

    auto* meas = app.add_subcommand("measure", "invariant measure via winding matrices");
    map_opt(meas, false);
    meas->add_option("--depth", o.depth, "levels (map mode)");
    types_opts(meas);
    meas->add_option("--winding", o.winding, "synthetic mode 'a1,b1;a2,b2;...'");
    meas->add_option("--pairs", o.pairs, "random pairs per contraction measurement");

    auto* ver = app.add_subcommand("verify", "invariant-window and estimate diagnostics");
    map_opt(ver, true);
    type_opt(ver);
    ver->add_option("--b-lower", o.b_lower, "lower bound for b (default: b of --type)");
    ver->add_option("--sigma", o.sigma, "sigma in (0,1)");
    ver->add_option("--beta", o.beta, "beta");
    ver->add_option("--theta", o.theta, "theta > 0");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        CLI::App* target = &app;
        for (auto* s : app.get_subcommands()) target = s;
        out << target->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        out << error_json("malformed_input", e.what()).dump(2) << "\n";
        return 2;
    }

    if (o.threads > 0) setenv("RENORMLAB_THREADS", std::to_string(o.threads).c_str(), 1);

    using Cmd = std::function<json(const Options&)>;
    const std::vector<std::pair<CLI::App*, Cmd>> table = {
        {eval, cmd_eval},       {renorm, cmd_renorm},   {island, cmd_island}, {cas, cmd_cascade},
        {fp, cmd_fixed_point},  {jac, cmd_jacobian},    {cone, cmd_cone},     {att, cmd_attractor},
        {meas, cmd_measure},    {ver, cmd_verify}};
    json result;
    try {
        for (const auto& [sub, fn] : table)
            if (sub->parsed()) result = fn(o);
    } catch (const io::InputError& e) {
        err << "malformed input: " << e.what() << "\n";
        out << error_json("malformed_input", e.what()).dump(2) << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        out << error_json(error_code_name(e.code()), e.what()).dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        out << error_json("internal", e.what()).dump(2) << "\n";
        return 1;
    }
    result["schema"] = 1;
    std::string text = result.dump(2) + "\n";
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) {
            out << error_json("malformed_input", "cannot write --out file").dump(2) << "\n";
            return 2;
        }
        f << text;
    } else {
        out << text;
    }
    return 0;
}

}  // namespace renormlab::cli
