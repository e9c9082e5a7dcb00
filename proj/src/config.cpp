#include "hwepi/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "hwepi/errors.hpp"

namespace hwepi {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("key '" + key + "': not a number: '" + value + "'");
    }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
    Int v{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("key '" + key + "': not an integer: '" + value + "'");
    return v;
}

const std::set<std::string> kKnownKeys = {
    "h", "d", "theta", "beta", "pi_g", "pi_h_given_gc", "beta_h", "beta_w", "beta_g",
    "infectious_period", "n", "seed"};

}  // namespace

Config parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
        if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
        if (value.empty()) throw ConfigError("key '" + key + "' has an empty value");
        kv[key] = value;
    }

    Config cfg;
    auto& p = cfg.params;
    if (kv.count("h")) p.h = to_int<int>("h", kv["h"]);
    if (kv.count("d")) p.d = to_int<int>("d", kv["d"]);
    if (kv.count("theta")) p.theta = to_double("theta", kv["theta"]);
    if (kv.count("n")) p.n = to_int<std::int64_t>("n", kv["n"]);
    if (kv.count("seed")) cfg.seed = to_int<std::uint64_t>("seed", kv["seed"]);
    if (kv.count("infectious_period")) p.infectious_period = InfectiousPeriod::parse(kv["infectious_period"]);

    const bool any_reparam = kv.count("beta") || kv.count("pi_g") || kv.count("pi_h_given_gc");
    const bool any_direct = kv.count("beta_h") || kv.count("beta_w") || kv.count("beta_g");
    if (any_reparam && any_direct)
        throw ConfigError("give either (beta, pi_g, pi_h_given_gc) or (beta_h, beta_w, beta_g), not both");
    if (any_reparam) {
        for (const char* k : {"beta", "pi_g", "pi_h_given_gc"})
            if (!kv.count(k)) throw ConfigError(std::string("missing key '") + k + "'");
        p.rates = from_reparam(Reparam{to_double("beta", kv["beta"]), to_double("pi_g", kv["pi_g"]),
                                       to_double("pi_h_given_gc", kv["pi_h_given_gc"])});
    } else if (any_direct) {
        for (const char* k : {"beta_h", "beta_w", "beta_g"})
            if (!kv.count(k)) throw ConfigError(std::string("missing key '") + k + "'");
        p.rates = Rates{to_double("beta_h", kv["beta_h"]), to_double("beta_w", kv["beta_w"]),
                        to_double("beta_g", kv["beta_g"])};
    } else {
        throw ConfigError("no contact rates given");
    }
    p.validate();
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const Config& config) {
    const auto& p = config.params;
    std::ostringstream os;
    os << std::setprecision(17);
    os << "h=" << p.h << "\n"
       << "d=" << p.d << "\n"
       << "theta=" << p.theta << "\n"
       << "beta_h=" << p.rates.beta_h << "\n"
       << "beta_w=" << p.rates.beta_w << "\n"
       << "beta_g=" << p.rates.beta_g << "\n"
       << "infectious_period=" << p.infectious_period.name() << "\n";
    if (p.n > 0) os << "n=" << p.n << "\n";
    if (config.seed) os << "seed=" << *config.seed << "\n";
    return os.str();
}

}  // namespace hwepi
