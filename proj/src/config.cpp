#include "dhm/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace dhm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<double> parse_numbers(std::string s) {
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || end != tok.data() + tok.size()) throw ConfigError("not a number: '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

double parse_double(const std::string& s) {
    const auto v = parse_numbers(s);
    if (v.size() != 1) throw ConfigError("expected a single number, got '" + s + "'");
    return v[0];
}

int parse_int(const std::string& s) {
    const double v = parse_double(s);
    if (v != static_cast<double>(static_cast<long long>(v))) throw ConfigError("expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("expected a boolean, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& s) {
    auto v = parse_numbers(s);
    if (v.empty()) throw ConfigError("empty list");
    return v;
}

std::string join(const std::vector<double>& v, const char* sep = " ") {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
    return os.str();
}

using Setter = std::function<void(const std::string&)>;
using Schema = std::map<std::string, std::map<std::string, Setter>>;

Schema make_schema(ExperimentConfig& c) {
    auto dbl = [](double& x) -> Setter { return [&x](const std::string& s) { x = parse_double(s); }; };
    auto integer = [](int& x) -> Setter { return [&x](const std::string& s) { x = parse_int(s); }; };
    auto& a = c.agent;
    auto& p = c.agent.planner;
    auto& o = c.agent.overrides;
    auto& e = c.env;
    Schema s;
    s["experiment"] = {{"max_steps", integer(c.max_steps)},
                       {"final_window", integer(c.final_window)},
                       {"success_distance", dbl(c.success_distance)}};
    s["agent"] = {{"dt", dbl(a.dt)},
                  {"pi_proprio", dbl(a.pi_proprio)},
                  {"pi_visual_arm", dbl(a.pi_visual_arm)},
                  {"pi_visual_object", dbl(a.pi_visual_object)},
                  {"pi_extrinsic", dbl(a.pi_extrinsic)},
                  {"pi_dynamics", dbl(a.pi_dynamics)},
                  {"pi_dynamics_intrinsic", dbl(a.pi_dynamics_intrinsic)},
                  {"pi_length_prior", dbl(a.pi_length_prior)},
                  {"pi_virtual_coupling", dbl(a.pi_virtual_coupling)},
                  {"replan_period", integer(a.replan_period)},
                  {"length_scale", dbl(a.length_scale)},
                  {"action_clamp", dbl(a.action_clamp)},
                  {"intention_gain", dbl(a.intention_gain)},
                  {"intrinsic_intentions", [&a](const std::string& v) { a.intrinsic_intentions = parse_bool(v); }},
                  {"arm_intentions", [&a](const std::string& v) { a.arm_intentions = parse_bool(v); }},
                  {"min_length", dbl(a.min_length)},
                  {"belief_init", [&a](const std::string& v) { a.belief_init = parse_belief_init(v); }}};
    s["planner"] = {{"policy_length", integer(p.policy_length)},
                    {"likelihood_softening", dbl(p.likelihood_softening)},
                    {"tactile_reliability", dbl(p.tactile_reliability)},
                    {"goal_preference", dbl(p.goal_preference)},
                    {"a_e4", [&o](const std::string& v) { o.a_e4 = parse_matrix(v); }},
                    {"a_e5", [&o](const std::string& v) { o.a_e5 = parse_matrix(v); }},
                    {"a_t", [&o](const std::string& v) { o.a_t = parse_matrix(v); }},
                    {"c", [&o](const std::string& v) { o.c = parse_vector(v); }},
                    {"d", [&o](const std::string& v) { o.d = parse_vector(v); }}};
    s["env"] = {{"arena", dbl(e.arena)},
                {"base",
                 [&e](const std::string& v) {
                     const auto b = parse_list(v);
                     if (b.size() != 2) throw ConfigError("base needs two coordinates");
                     e.base = Vec2(b[0], b[1]);
                 }},
                {"limb_lengths", [&e](const std::string& v) { e.limb_lengths = parse_list(v); }},
                {"tool_length", dbl(e.tool_length)},
                {"grasp_threshold", dbl(e.grasp_threshold)},
                {"joint_limit", dbl(e.joint_limit)},
                {"initial_angles", [&e](const std::string& v) { e.initial_angles = parse_list(v); }},
                {"spawn_clearance", dbl(e.spawn_clearance)},
                {"reach_margin", dbl(e.reach_margin)},
                {"visual_noise", dbl(e.visual_noise)},
                {"spawn_moving_in_reach", [&e](const std::string& v) { e.spawn_moving_in_reach = parse_bool(v); }},
                {"align_tool_on_grasp", [&e](const std::string& v) { e.align_tool_on_grasp = parse_bool(v); }}};
    return s;
}

} // namespace

Vec parse_vector(const std::string& s) {
    const auto v = parse_list(s);
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Mat parse_matrix(const std::string& s) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(s);
    std::string row;
    while (std::getline(is, row, ';')) {
        if (trim(row).empty()) continue;
        rows.push_back(parse_list(row));
    }
    if (rows.empty()) throw ConfigError("empty matrix");
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ConfigError("matrix rows have different lengths");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

ExperimentConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream is(text);
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    ExperimentConfig cfg;
    Schema schema = make_schema(cfg);
    for (const auto& [section, keys] : tree) {
        const auto sec = schema.find(section);
        if (sec == schema.end()) throw ConfigError("unknown section [" + section + "]");
        if (keys.empty() && !keys.data().empty()) throw ConfigError("key '" + section + "' outside any section");
        for (const auto& [key, value] : keys) {
            const auto k = sec->second.find(key);
            if (k == sec->second.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
            try {
                k->second(trim(value.data()));
            } catch (const ConfigError& e) {
                throw ConfigError("[" + section + "] " + key + ": " + e.what());
            } catch (const std::invalid_argument& e) {
                throw ConfigError("[" + section + "] " + key + ": " + e.what());
            }
        }
    }
    try {
        cfg.validate();
        Agent probe(cfg.agent, cfg.env);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string default_config_text() {
    const ExperimentConfig c;
    const auto& a = c.agent;
    const auto& p = a.planner;
    const auto& e = c.env;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::boolalpha;
    os << "[experiment]\n"
       << "max_steps = " << c.max_steps << "\n"
       << "; steps averaged into the final error\n"
       << "final_window = " << c.final_window << "\n"
       << "; pixels, ball to tool tip\n"
       << "success_distance = " << c.success_distance << "\n\n"
       << "[agent]\n"
       << "dt = " << a.dt << "\n"
       << "pi_proprio = " << a.pi_proprio << "\n"
       << "pi_visual_arm = " << a.pi_visual_arm << "\n"
       << "pi_visual_object = " << a.pi_visual_object << "\n"
       << "pi_extrinsic = " << a.pi_extrinsic << "\n"
       << "pi_dynamics = " << a.pi_dynamics << "\n"
       << "pi_dynamics_intrinsic = " << a.pi_dynamics_intrinsic << "\n"
       << "pi_length_prior = " << a.pi_length_prior << "\n"
       << "pi_virtual_coupling = " << a.pi_virtual_coupling << "\n"
       << "replan_period = " << a.replan_period << "\n"
       << "; pixels per body unit\n"
       << "length_scale = " << a.length_scale << "\n"
       << "; rad per step\n"
       << "action_clamp = " << a.action_clamp << "\n"
       << "intention_gain = " << a.intention_gain << "\n"
       << "intrinsic_intentions = " << a.intrinsic_intentions << "\n"
       << "arm_intentions = " << a.arm_intentions << "\n"
       << "min_length = " << a.min_length << "\n"
       << "; actual | neutral\n"
       << "belief_init = " << belief_init_name(a.belief_init) << "\n\n"
       << "[planner]\n"
       << "policy_length = " << p.policy_length << "\n"
       << "likelihood_softening = " << p.likelihood_softening << "\n"
       << "tactile_reliability = " << p.tactile_reliability << "\n"
       << "goal_preference = " << p.goal_preference << "\n"
       << "; optional overrides: a_e4 (3x6), a_e5 (2x6), a_t (2x6), c (6), d (6); rows separated by ';'\n\n"
       << "[env]\n"
       << "arena = " << e.arena << "\n"
       << "base = " << e.base.x() << " " << e.base.y() << "\n"
       << "limb_lengths = " << join(e.limb_lengths) << "\n"
       << "tool_length = " << e.tool_length << "\n"
       << "grasp_threshold = " << e.grasp_threshold << "\n"
       << "; rad, inf for freely rotating joints\n"
       << "joint_limit = " << e.joint_limit << "\n"
       << "initial_angles = " << join(e.initial_angles) << "\n"
       << "spawn_clearance = " << e.spawn_clearance << "\n"
       << "reach_margin = " << e.reach_margin << "\n"
       << "visual_noise = " << e.visual_noise << "\n"
       << "; moving objects start in reach too; false spawns them anywhere in the arena\n"
       << "spawn_moving_in_reach = " << e.spawn_moving_in_reach << "\n"
       << "; a held tool extends the last limb instead of keeping its angle at contact\n"
       << "align_tool_on_grasp = " << e.align_tool_on_grasp << "\n";
    return os.str();
}

} // namespace dhm
