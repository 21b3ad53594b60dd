#include "biflip/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "biflip/ops.hpp"
#include "biflip/service.hpp"
#include "biflip/svg.hpp"

namespace biflip {

namespace {

struct Options {
    std::string scene_path;
    std::string biflipper, first, second, a, b, flipper, side = "tail", word;
    std::optional<double> tol;
    bool strict = false;
    bool fallback = false;
    bool json = false;
    std::string svg_path;
    std::string space = "E2";
    std::uint64_t seed = 1;
    std::string host = "127.0.0.1";
    int port = 8080;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::MalformedInput, "cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) fail(ErrorCode::MalformedInput, "cannot write '" + path + "'");
}

Json request(const Options& o) {
    Json r;
    r["scene"] = parse_json(read_file(o.scene_path));
    return r;
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    Flipper flipper(Space space) {
        const int d = intrinsic_dim(space);
        switch (space) {
        case Space::E1: return point_flipper(space, vec(1, 3));
        case Space::E2:
        case Space::E3: {
            const int kind = pick(d);
            if (kind == 0) return point_flipper(space, vec(d, 3));
            if (kind == 1) return line_flipper(space, vec(d, 3), unit(d));
            return plane_flipper(vec(3, 3), unit(3));
        }
        case Space::S2: return pick(2) ? polar_flipper(space, unit(3)) : pair_flipper(unit(3));
        case Space::RP2: return point_flipper(space, unit(3));
        case Space::H2:
        case Space::H3: {
            const int kind = pick(d);
            if (kind == 0) return point_flipper(space, hyperbolic(d));
            if (kind == 1 && d == 2) return polar_flipper(space, spacelike(2));
            if (kind == 1) return ideal_line_flipper(space, ideal(3), ideal(3));
            return polar_flipper(space, spacelike(3));
        }
        case Space::Moeb: return pick(2) ? polar_flipper(space, spacelike(3)) : ideal_line_flipper(space, ideal(3), ideal(3));
        }
        return whole_flipper(space);
    }

    Flipper line(Space space) { return line_flipper(space, vec(2, 3), unit(2)); }

private:
    int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    Vec vec(int n, double r) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform(-r, r);
        return v;
    }

    Vec unit(int n) {
        Vec v;
        do v = vec(n, 1);
        while (v.norm() < 0.1 || v.norm() > 1);
        return v.normalized();
    }

    Vec hyperbolic(int d) {
        const Vec p = unit(d) * uniform(0, 0.7);
        return model_convert(p, d == 2 ? Chart::PoincareDisk : Chart::PoincareBall, Chart::Hyperboloid);
    }

    Vec ideal(int d) {
        Vec v(d + 1);
        v << 1.0, unit(d);
        return v;
    }

    Vec spacelike(int d) {
        Vec v(d + 1);
        v << uniform(-0.7, 0.7), unit(d);
        return v;
    }

    std::mt19937_64 rng_;
};

// Four flippers, two biflippers and, in E2, a reflection word of five lines.
Json sample_scene(Space space, std::uint64_t seed) {
    Sampler s(seed);
    Scene scene;
    scene.space = space;
    for (int i = 1; i <= 4; ++i) scene.flippers.emplace_back("f" + std::to_string(i), s.flipper(space));
    scene.biflippers.emplace_back("b1", Biflipper{scene.flippers[0].second, scene.flippers[1].second});
    scene.biflippers.emplace_back("b2", Biflipper{scene.flippers[2].second, scene.flippers[3].second});
    if (space == Space::E2) {
        ReflectionWord w;
        for (int i = 1; i <= 5; ++i) {
            scene.flippers.emplace_back("l" + std::to_string(i), s.line(space));
            w.push_back(scene.flippers.back().second);
        }
        scene.words.emplace_back("w1", w);
    }
    return scene_to_json(scene);
}

struct Command {
    std::string name;
    std::string op;
    std::vector<std::pair<const char*, std::string Options::*>> params;
    CLI::App* app = nullptr;
};

void print_json(std::ostream& out, const Json& j) { out << dump(j) << "\n"; }

void render(const Options& o, const Json& req, std::ostream& out) {
    const Scene scene = scene_from_json(req.at("scene"));
    const Biflipper& first = scene.biflipper(o.first);
    const Biflipper& second = scene.biflipper(o.second);
    const std::string svg = render_svg(first, second, head_to_tail(first, second, o.strict ? Mode::Strict : Mode::Fallback));
    if (o.svg_path.empty()) out << svg;
    else write_file(o.svg_path, svg);
}

int execute(const Options& o, const Command& c, std::ostream& out) {
    if (c.name == "serve") {
        out << "listening on " << o.host << ":" << o.port << std::endl;
        return serve(o.host, o.port);
    }
    if (c.name == "sample") {
        print_json(out, sample_scene(space_from_string(o.space), o.seed));
        return 0;
    }
    if (c.name == "spaces") {
        print_json(out, run_operation("spaces", Json::object()));
        return 0;
    }
    Json req = request(o);
    if (c.name == "render") {
        render(o, req, out);
        return 0;
    }
    for (const auto& [key, field] : c.params) req[key] = o.*field;
    if (c.name == "compose" && (o.strict || o.fallback)) req["mode"] = o.strict ? "strict" : "fallback";
    if (o.tol && (c.name == "equiv" || c.name == "rebase")) req["tol"] = *o.tol;
    print_json(out, run_operation(c.op, req));
    if (c.name == "compose" && !o.svg_path.empty()) render(o, req, out);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app("Biflipper calculus for isometries");
    app.require_subcommand(1);

    using P = std::pair<const char*, std::string Options::*>;
    std::vector<Command> commands{
        {"classify", "classify", {P{"biflipper", &Options::biflipper}}},
        {"encode", "encode", {P{"biflipper", &Options::biflipper}}},
        {"compose", "compose", {P{"first", &Options::first}, P{"second", &Options::second}}},
        {"linked", "linked", {P{"first", &Options::first}, P{"second", &Options::second}}},
        {"equiv", "equivalent", {P{"a", &Options::a}, P{"b", &Options::b}}},
        {"rebase", "rebase", {P{"biflipper", &Options::biflipper}, P{"flipper", &Options::flipper}, P{"side", &Options::side}}},
        {"reduce", "reduce", {P{"word", &Options::word}}},
        {"quat", "quaternion/lift", {P{"biflipper", &Options::biflipper}}},
        {"render", "", {P{"first", &Options::first}, P{"second", &Options::second}}},
        {"spaces", "spaces", {}},
        {"sample", "", {}},
        {"serve", "", {}},
    };
    const std::map<std::string, std::string> help{
        {"classify", "Classify the isometry of a biflipper"},
        {"encode", "Print the matrix of a biflipper"},
        {"compose", "Compose two biflippers head to tail"},
        {"linked", "Find a common flipper of two biflippers"},
        {"equiv", "Test whether two biflippers encode the same isometry"},
        {"rebase", "Move a biflipper so that one end is the given flipper"},
        {"reduce", "Reduce a reflection word"},
        {"quat", "Unit quaternion of an S2 biflipper"},
        {"render", "SVG figure of a head-to-tail composition"},
        {"spaces", "List the supported spaces"},
        {"sample", "Random scene for a space"},
        {"serve", "Run the HTTP service"},
    };

    for (Command& c : commands) {
        c.app = app.add_subcommand(c.name, help.at(c.name));
        CLI::App* sub = c.app;
        const bool has_scene = !c.params.empty();
        if (has_scene) sub->add_option("scene", o.scene_path, "Scene JSON file")->required();
        for (const auto& [key, field] : c.params) {
            auto* opt = sub->add_option(std::string("--") + key, o.*field, std::string("Id or value of ") + key);
            if (std::string(key) != "side") opt->required();
        }
        if (has_scene) {
            sub->add_option("--tol", o.tol, "Tolerance (default 1e-9)");
            sub->add_flag("--json", o.json, "JSON output (the default)");
        }
        if (c.name == "compose" || c.name == "render") {
            auto* s = sub->add_flag("--strict", o.strict, "Fail with NotLinked when there is no common flipper");
            auto* f = sub->add_flag("--fallback", o.fallback, "Use the fallback reductions (default)");
            s->excludes(f);
            sub->add_option("--svg", o.svg_path, "Write the SVG figure to this path");
        }
        if (c.name == "sample") {
            sub->add_option("--space", o.space, "Space tag")->default_str("E2");
            sub->add_option("--seed", o.seed, "Random seed")->default_str("1");
        }
        if (c.name == "serve") {
            sub->add_option("--port", o.port, "Port")->default_str("8080");
            sub->add_option("--host", o.host, "Address to bind")->default_str("127.0.0.1");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: MalformedInput: " << e.what() << "\n";
        return 2;
    }

    const auto chosen = app.get_subcommands().front();
    for (const Command& c : commands) {
        if (c.app != chosen) continue;
        try {
            return execute(o, c, out);
        } catch (const GeometryError& e) {
            err << "error: " << e.name() << ": " << e.what() << "\n";
            return e.code() == ErrorCode::MalformedInput ? 2 : 1;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}

} // namespace biflip
