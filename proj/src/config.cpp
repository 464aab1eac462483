#include "ibf/config.hpp"

#include <fstream>

namespace ibf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long n = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(n);
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": \"" + v + "\" is not an integer");
    }
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": \"" + v + "\" is not a number");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key " + key + ": \"" + v + "\" is not a boolean");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": \"" + v + "\" is not an unsigned integer");
    }
}

} // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    TrainConfig& t = train;
    if (key == "batch_size") t.batch_size = parse_int(key, value);
    else if (key == "learning_rate") t.learning_rate = static_cast<float>(parse_real(key, value));
    else if (key == "iterations") t.iterations = parse_int(key, value);
    else if (key == "adam_beta1") t.beta1 = static_cast<float>(parse_real(key, value));
    else if (key == "adam_beta2") t.beta2 = static_cast<float>(parse_real(key, value));
    else if (key == "adam_epsilon") t.epsilon = static_cast<float>(parse_real(key, value));
    else if (key == "checkpoint_every") t.checkpoint_every = parse_int(key, value);
    else if (key == "weight_mode") {
        if (value == "scan") t.weights.mode = WeightMode::Scan;
        else if (value == "cell") t.weights.mode = WeightMode::Cell;
        else throw ConfigError("weight_mode must be scan or cell, got \"" + value + "\"");
    }
    else if (key == "weight_min") t.weights.w_min = static_cast<float>(parse_real(key, value));
    else if (key == "weight_max") t.weights.w_max = static_cast<float>(parse_real(key, value));
    else if (key == "delta") t.augment.delta = parse_int(key, value);
    else if (key == "theta_r") t.augment.theta_r = parse_real(key, value);
    else if (key == "rotation_enabled") t.augment.rotation_enabled = parse_bool(key, value);
    else if (key == "identity_augment") t.augment.identity_augment = parse_bool(key, value);
    else if (key == "crop_width") t.augment.crop_width = parse_int(key, value);
    else if (key == "crop_height") t.augment.crop_height = parse_int(key, value);
    else if (key == "seed") {
        t.seed = parse_u64(key, value);
        t.augment.seed = t.seed;
    }
    else if (key == "low_channel_multiplier") low_channel_multiplier = parse_int(key, value);
    else if (key == "channel_cap") channel_cap = parse_int(key, value);
    else if (key == "rng_algo") rng_algo = value;
    else throw ConfigError("unknown config key \"" + key + "\"");
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": empty key or value");
        cfg.apply(key, value);
    }
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    train.validate();
    if (low_channel_multiplier < 1)
        throw ConfigError("low_channel_multiplier must be >= 1");
    if (channel_cap != 0 && channel_cap < 8)
        throw ConfigError("channel_cap must be 0 (off) or >= 8");
    if (rng_algo != "mt19937_64")
        throw ConfigError("rng_algo must be mt19937_64 (the one supported generator), got \"" +
                          rng_algo + "\"");
    if (train.augment.crop_width <= 0 || train.augment.crop_height <= 0 ||
        train.augment.crop_width % 16 != 0 || train.augment.crop_height % 16 != 0)
        throw ConfigError("crop_width/crop_height must be positive multiples of 16");
}

LayerTable RunConfig::make_table() const {
    return LayerTable::standard()
        .with_low_multiplier(low_channel_multiplier)
        .with_channel_cap(channel_cap);
}

} // namespace ibf
