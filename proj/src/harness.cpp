#include "chessflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "chessflow/svg.hpp"

namespace chessflow {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string(what) + ": cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::vector<double> time_grid(double t_max, double dt) {
    std::vector<double> ts;
    auto n = static_cast<long long>(std::floor(t_max / dt + 1e-9));
    for (long long k = 0; k <= n; ++k) ts.push_back(std::min(static_cast<double>(k) * dt, t_max));
    return ts;
}

int nearest_odd(double x) {
    // Odd integers are 2m+1; ties between two odd neighbours round down.
    double m = std::ceil((x - 1.0) / 2.0 - 0.5);
    return std::max(1, static_cast<int>(2.0 * m + 1.0));
}

Point centroid_of(const std::vector<Point>& v) {
    double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
    for (const auto& p : v) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return {(xmin + xmax) / 2, (ymin + ymax) / 2};
}

FlowOptions options_for(const RunConfig& cfg) {
    FlowOptions o;
    o.dt_out = cfg.dt_out;
    return o;
}

}  // namespace

std::vector<double> RunConfig::epsilon_list() const { return epsilons.empty() ? std::vector<double>{epsilon} : epsilons; }

void RunConfig::validate() const {
    if (!(alpha < 0.0)) throw ConfigError("alpha: must be negative");
    if (!(beta > 0.0)) throw ConfigError("beta: must be positive");
    for (double e : epsilon_list()) {
        if (!(e > 0.0)) throw ConfigError("epsilon: must be positive");
        if (!(e < 8.0 / (beta - alpha))) throw ConfigError("epsilon: must be below 8/(beta-alpha)");
    }
    if (shape == ShapeKind::square && !(side > 0.0)) throw ConfigError("side: must be positive");
    if (shape == ShapeKind::rectangle && !(width > 0.0 && height > 0.0))
        throw ConfigError("width/height: must be positive");
    if (shape == ShapeKind::vertices && vertex_file.empty()) throw ConfigError("vertex_file: required for shape=vertices");
    if (shape == ShapeKind::octagon && !(octagon_edge > 0.0)) throw ConfigError("octagon_edge: must be positive");
    if (shape == ShapeKind::octagon && octagon_steps < 0) throw ConfigError("octagon_steps: must be non-negative");
    if (!(t_max >= 0.0)) throw ConfigError("t_max: must be non-negative");
    if (!(dt_out > 0.0)) throw ConfigError("dt_out: must be positive");
}

void apply_override(RunConfig& c, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "alpha") c.alpha = to_double(key, v);
    else if (key == "beta") c.beta = to_double(key, v);
    else if (key == "epsilon") c.epsilon = to_double(key, v);
    else if (key == "epsilons") {
        c.epsilons.clear();
        std::string item;
        std::istringstream in(v);
        while (std::getline(in, item, ','))
            if (!trim(item).empty()) c.epsilons.push_back(to_double(key, trim(item)));
        if (c.epsilons.empty()) throw ConfigError("epsilons: empty list");
    } else if (key == "shape") {
        if (v == "square") c.shape = ShapeKind::square;
        else if (v == "rectangle") c.shape = ShapeKind::rectangle;
        else if (v == "vertices") c.shape = ShapeKind::vertices;
        else if (v == "octagon") c.shape = ShapeKind::octagon;
        else throw ConfigError("shape: unknown value '" + v + "'");
    } else if (key == "side") c.side = to_double(key, v);
    else if (key == "width") c.width = to_double(key, v);
    else if (key == "height") c.height = to_double(key, v);
    else if (key == "vertex_file") c.vertex_file = v;
    else if (key == "octagon_edge") c.octagon_edge = to_double(key, v);
    else if (key == "octagon_steps") c.octagon_steps = static_cast<int>(to_double(key, v));
    else if (key == "alignment") {
        if (v == "cell_corner") c.alignment = Alignment::cell_corner;
        else if (v == "offset") c.alignment = Alignment::offset;
        else throw ConfigError("alignment: unknown value '" + v + "'");
    } else if (key == "offset_dx") c.offset_dx = to_double(key, v);
    else if (key == "offset_dy") c.offset_dy = to_double(key, v);
    else if (key == "t_max") c.t_max = to_double(key, v);
    else if (key == "dt_out") c.dt_out = to_double(key, v);
    else if (key == "output_dir") c.output_dir = v;
    else if (key == "frames") {
        if (v == "true" || v == "1") c.frames = true;
        else if (v == "false" || v == "0") c.frames = false;
        else throw ConfigError("frames: expected true or false");
    } else
        throw ConfigError("unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected key = value");
        try {
            apply_override(c, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(n) + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path, "config")); }

std::vector<Point> parse_vertices(const std::string& text) {
    std::vector<Point> pts;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream row(line);
        double x, y;
        std::string extra;
        if (!(row >> x >> y) || (row >> extra) || !std::isfinite(x) || !std::isfinite(y))
            throw ConfigError("vertex file line " + std::to_string(n) + ": expected two numbers, got '" + line + "'");
        pts.push_back({x, y});
    }
    if (pts.size() < 4) throw ConfigError("vertex file: fewer than 4 vertices");
    return pts;
}

InitialData approximate_rectangle(double l1, double l2, double epsilon, double dx, double dy) {
    const double h = epsilon / 2.0;
    double w = nearest_odd(l1 / h) * h;
    double ht = nearest_odd(l2 / h) * h;
    return {Polyrectangle::rectangle(dx, dy, w, ht), {dx + w / 2, dy + ht / 2}};
}

InitialData approximate_square(double l, double epsilon, double dx, double dy) {
    return approximate_rectangle(l, l, epsilon, dx, dy);
}

Polyrectangle pinned_octagon(double straight, int steps, double epsilon) {
    const double h = epsilon / 2.0;
    const double L = nearest_odd(straight / h) * h;
    std::vector<Point> v;
    Point p{0.0, 0.0};
    auto go = [&](double dx, double dy) {
        p.x += dx;
        p.y += dy;
        v.push_back(p);
    };
    v.push_back(p);
    go(L, 0);
    for (int k = 0; k < steps; ++k) go(0, h), go(h, 0);
    go(0, L);
    for (int k = 0; k < steps; ++k) go(-h, 0), go(0, h);
    go(-L, 0);
    for (int k = 0; k < steps; ++k) go(0, -h), go(-h, 0);
    go(0, -L);
    for (int k = 0; k < steps; ++k) go(h, 0), go(0, -h);
    return Polyrectangle::from_vertices(v);
}

InitialData initial_data(const RunConfig& cfg, double epsilon) {
    double dx = 0.0, dy = 0.0;
    if (cfg.alignment == Alignment::offset) {
        dx = cfg.offset_dx;
        dy = cfg.offset_dy;
    }
    switch (cfg.shape) {
        case ShapeKind::square: return approximate_square(cfg.side, epsilon, dx, dy);
        case ShapeKind::rectangle: return approximate_rectangle(cfg.width, cfg.height, epsilon, dx, dy);
        case ShapeKind::vertices: {
            auto pts = parse_vertices(read_file(cfg.vertex_file, "vertex_file"));
            for (auto& p : pts) p.x += dx, p.y += dy;
            auto poly = Polyrectangle::from_vertices(pts);
            return {poly, centroid_of(poly.vertices())};
        }
        case ShapeKind::octagon: {
            auto poly = pinned_octagon(cfg.octagon_edge, cfg.octagon_steps, epsilon);
            auto pts = poly.vertices();
            for (auto& p : pts) p.x += dx, p.y += dy;
            poly = Polyrectangle::from_vertices(pts);
            return {poly, centroid_of(pts)};
        }
    }
    throw ConfigError("shape: unsupported");
}

std::vector<Point> shape_at(const FlowTrajectory& tr, double t) {
    if (tr.samples.empty()) throw std::invalid_argument("shape_at: empty trajectory");
    const double slack = 1e-12 * std::max(1.0, std::abs(t));
    if (tr.termination == Termination::extinction && t >= tr.end_time - slack)
        return {centroid_of(tr.samples.back().shape.vertices())};
    auto it = std::upper_bound(tr.samples.begin(), tr.samples.end(), t + slack,
                               [](double v, const Snapshot& s) { return v < s.time; });
    if (it != tr.samples.begin()) --it;
    return it->shape.vertices();
}

CaseTag effective_case(const RunConfig& cfg) {
    if (cfg.shape == ShapeKind::square || (cfg.shape == ShapeKind::rectangle && cfg.width == cfg.height)) {
        double l = cfg.shape == ShapeKind::square ? cfg.side : cfg.width;
        return classify_square(l, cfg.alpha, cfg.beta);
    }
    if (cfg.shape == ShapeKind::rectangle)
        return classify_rectangle(std::max(cfg.width, cfg.height), std::min(cfg.width, cfg.height), cfg.alpha,
                                  cfg.beta);
    throw ConfigError("shape: effective motion needs a square or a rectangle");
}

EffectiveState effective_at(const RunConfig& cfg, double t) {
    effective_case(cfg);
    if (cfg.shape == ShapeKind::square) return integrate_square(cfg.side, cfg.alpha, cfg.beta, t);
    if (cfg.width == cfg.height) return integrate_square(cfg.width, cfg.alpha, cfg.beta, t);
    return integrate_rectangle(cfg.width, cfg.height, cfg.alpha, cfg.beta, t);
}

double trajectory_distance(const FlowTrajectory& a, const FlowTrajectory& b, double t_max, double dt) {
    double sup = 0.0;
    for (double t : time_grid(t_max, dt)) {
        auto pa = shape_at(a, t);
        auto pb = shape_at(b, t);
        sup = std::max(sup, hausdorff_distance(pa, pb));
    }
    return sup;
}

ComparisonReport compare(const RunConfig& cfg, bool with_alignment) {
    cfg.validate();
    effective_case(cfg);
    const auto eps = cfg.epsilon_list();
    const auto ts = time_grid(cfg.t_max, cfg.dt_out);
    std::vector<EffectiveState> limit;
    limit.reserve(ts.size());
    for (double t : ts) limit.push_back(effective_at(cfg, t));

    struct Job {
        InitialData init;
        FlowTrajectory main, shifted;
    };
    std::vector<std::future<Job>> jobs;
    for (double e : eps) {
        jobs.push_back(std::async(std::launch::async, [&cfg, e, with_alignment]() {
            Job j;
            ChessboardMedium medium(cfg.alpha, cfg.beta, e);
            j.init = initial_data(cfg, e);
            j.main = run(j.init.shape, medium, cfg.t_max, options_for(cfg));
            if (with_alignment) {
                RunConfig shifted = cfg;
                shifted.alignment = Alignment::offset;
                shifted.offset_dx = (cfg.alignment == Alignment::offset ? cfg.offset_dx : 0.0) + e / 4.0;
                shifted.offset_dy = (cfg.alignment == Alignment::offset ? cfg.offset_dy : 0.0) + e / 4.0;
                j.shifted = run(initial_data(shifted, e).shape, medium, cfg.t_max, options_for(cfg));
            }
            return j;
        }));
    }

    ComparisonReport rep;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        Job j = jobs[k].get();
        ComparisonRow row;
        row.epsilon = eps[k];
        row.termination = j.main.termination;
        row.end_time = j.main.end_time;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            double d = hausdorff_distance(shape_at(j.main, ts[i]), limit[i].outline(j.init.centre));
            row.times.push_back(ts[i]);
            row.distances.push_back(d);
            row.sup_distance = std::max(row.sup_distance, d);
        }
        row.terminal_distance = row.distances.empty() ? 0.0 : row.distances.back();
        if (with_alignment) row.alignment_distance = trajectory_distance(j.main, j.shifted, cfg.t_max, cfg.dt_out);
        if (!rep.rows.empty() && rep.rows.back().sup_distance > 0.0)
            row.ratio = row.sup_distance / rep.rows.back().sup_distance;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

SimulationSummary cmd_simulate(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.epsilons.size() > 1)
        throw ConfigError("epsilons: simulate takes a single epsilon");
    const double e = cfg.epsilon_list().front();
    ChessboardMedium medium(cfg.alpha, cfg.beta, e);
    InitialData init = initial_data(cfg, e);
    FlowTrajectory tr = run(init.shape, medium, cfg.t_max, options_for(cfg));

    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    std::string csv = "time,edge,normal,offset,length,pinned\n";
    for (const auto& s : tr.samples)
        for (std::size_t i = 0; i < s.shape.size(); ++i)
            csv += num(s.time) + "," + std::to_string(i) + "," + to_string(s.shape.normal(i)) + "," +
                   num(s.shape.offset(i)) + "," + num(s.shape.length(i)) + "," + (s.pinned[i] ? "1" : "0") + "\n";
    write_file(dir / "trajectory.csv", csv);

    std::string log;
    for (const auto& ev : tr.events) {
        log += num(ev.time) + " " + to_string(ev.kind) + " [";
        for (std::size_t k = 0; k < ev.indices.size(); ++k) log += (k ? " " : "") + std::to_string(ev.indices[k]);
        log += "] edges=" + std::to_string(ev.edges_after) + "\n";
    }
    log += "# termination " + std::string(to_string(tr.termination)) + " at t = " + num(tr.end_time) + "\n";
    if (tr.non_unique) log += "# warning: non-unique breaking configuration encountered\n";
    for (const auto& d : tr.diagnostics) log += "# " + d + "\n";
    write_file(dir / "events.log", log);

    if (cfg.frames) {
        fs::create_directories(dir / "frames");
        std::vector<Point> all;
        for (const auto& s : tr.samples) {
            auto v = s.shape.vertices();
            all.insert(all.end(), v.begin(), v.end());
        }
        Bounds view = bounds_of(all, e);
        int frame = 0;
        long long last_k = -1;
        for (std::size_t i = 0; i < tr.samples.size(); ++i) {
            const auto& s = tr.samples[i];
            double q = s.time / cfg.dt_out;
            auto k = std::llround(q);
            bool on_grid = std::abs(q - static_cast<double>(k)) < 1e-9 && k != last_k;
            if (!on_grid && i + 1 != tr.samples.size()) continue;
            last_k = k;
            char name[32];
            std::snprintf(name, sizeof name, "%04d.svg", frame++);
            write_file(dir / "frames" / name, frame_svg(s.shape, s.pinned, medium, s.time, view));
        }
    }
    return {tr.termination, tr.end_time, tr.events.size(), tr.samples.size(), tr.non_unique};
}

CaseTag cmd_effective(const RunConfig& cfg) {
    cfg.validate();
    CaseTag tag = effective_case(cfg);
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    std::string csv = "t,shape,l1,l2,frame,U,J\n";
    for (double t : time_grid(cfg.t_max, cfg.dt_out)) {
        EffectiveState st = effective_at(cfg, t);
        csv += num(t) + "," + to_string(st.shape) + "," + num(st.l1) + "," + num(st.l2) + "," + num(st.frame) + ",";
        if (st.l1 > 0.0 && st.l2 > 0.0) {
            auto inv = invariants(st.l1, st.l2, cfg.alpha, cfg.beta);
            csv += num(inv.U) + "," + num(inv.J);
        } else {
            csv += ",";
        }
        csv += "\n";
    }
    write_file(dir / "effective.csv", csv);

    double l1 = cfg.shape == ShapeKind::square ? cfg.side : cfg.width;
    double l2 = cfg.shape == ShapeKind::square ? cfg.side : cfg.height;
    EffectiveState lim = limit_state(l1, l2, cfg.alpha, cfg.beta);
    std::string info = std::string("case ") + to_string(tag) + "\nlimit " + to_string(lim.shape) + "\n";
    if (lim.shape == EffectiveShape::point) info += "extinction_time " + num(lim.extinction_time) + "\n";
    else info += "l1 " + num(lim.l1) + "\nl2 " + num(lim.l2) + "\nframe " + num(lim.frame) + "\n";
    if (lim.switch_time >= 0.0) info += "switch_time " + num(lim.switch_time) + "\n";
    write_file(dir / "case.txt", info);

    if (cfg.shape == ShapeKind::rectangle) {
        double lm = 1.5 * std::max({l1, l2, cfg.alpha + cfg.beta < 0 ? -8.0 / (cfg.alpha + cfg.beta) : 0.0});
        std::vector<std::array<double, 2>> starts{{l1, l2}};
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                if (i != j) starts.push_back({lm * i / 5.0, lm * j / 5.0});
        write_file(dir / "phase_portrait.svg", phase_portrait_svg(cfg.alpha, cfg.beta, lm, starts, cfg.t_max));
    }
    return tag;
}

ComparisonReport cmd_compare(const RunConfig& cfg) {
    ComparisonReport rep = compare(cfg);
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    std::string csv = "epsilon,sup_dh,ratio,terminal_dh,alignment_dh,termination,end_time\n";
    std::string dist = "epsilon,t,dh\n";
    for (const auto& r : rep.rows) {
        csv += num(r.epsilon) + "," + num(r.sup_distance) + "," + num(r.ratio) + "," + num(r.terminal_distance) + "," +
               num(r.alignment_distance) + "," + to_string(r.termination) + "," + num(r.end_time) + "\n";
        for (std::size_t i = 0; i < r.times.size(); ++i)
            dist += num(r.epsilon) + "," + num(r.times[i]) + "," + num(r.distances[i]) + "\n";
    }
    write_file(dir / "report.csv", csv);
    write_file(dir / "distances.csv", dist);
    return rep;
}

std::vector<SimulationSummary> cmd_sweep(const RunConfig& cfg) {
    cfg.validate();
    const auto eps = cfg.epsilon_list();
    std::vector<std::future<SimulationSummary>> jobs;
    std::vector<std::string> dirs;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "eps_%02zu", k);
        dirs.push_back((fs::path(cfg.output_dir) / name).string());
        RunConfig one = cfg;
        one.epsilon = eps[k];
        one.epsilons.clear();
        one.output_dir = dirs.back();
        jobs.push_back(std::async(std::launch::async, [one]() { return cmd_simulate(one); }));
    }
    std::vector<SimulationSummary> out;
    std::string csv = "epsilon,directory,termination,end_time,events,samples,non_unique\n";
    for (std::size_t k = 0; k < eps.size(); ++k) {
        out.push_back(jobs[k].get());
        const auto& s = out.back();
        csv += num(eps[k]) + "," + fs::path(dirs[k]).filename().string() + "," + to_string(s.termination) + "," +
               num(s.end_time) + "," + std::to_string(s.events) + "," + std::to_string(s.samples) + "," +
               (s.non_unique ? "1" : "0") + "\n";
    }
    write_file(fs::path(cfg.output_dir) / "sweep.csv", csv);
    return out;
}

}  // namespace chessflow
