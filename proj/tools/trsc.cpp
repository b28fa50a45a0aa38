// trsc: run one finite-section experiment and print a PASS/FAIL line.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trsc/experiments.hpp"

namespace {

// "128,256,512" or "128,256,...,4096" (geometric continuation).
std::vector<long long> parse_sizes(const std::string& text)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    parts.push_back(cur);

    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &used);
        } catch (const std::exception&) {
            throw trsc::ConfigError("bad size '" + s + "' in --Ns");
        }
        if (used != s.size())
            throw trsc::ConfigError("bad size '" + s + "' in --Ns");
        return v;
    };

    std::vector<long long> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] != "...") {
            out.push_back(number(parts[i]));
            continue;
        }
        if (out.size() < 2 || i + 1 != parts.size() - 1)
            throw trsc::ConfigError("'...' in --Ns needs two leading sizes and one final size");
        const long long last = number(parts[i + 1]);
        const long long a = out[out.size() - 2], b = out.back();
        if (a <= 0 || b <= a)
            throw trsc::ConfigError("'...' in --Ns needs increasing positive sizes");
        const bool geometric = b % a == 0;
        long long next = geometric ? b * (b / a) : b + (b - a);
        while (next < last) {
            out.push_back(next);
            next = geometric ? next * (b / a) : next + (b - a);
        }
        if (next != last)
            throw trsc::ConfigError("final size in --Ns does not continue the progression");
        out.push_back(last);
        break;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-section experiments for triangular truncation and Schur multipliers"};
    app.set_version_flag("--version", std::string(trsc::kVersion));

    std::string name;
    std::string config_path, Ns_text, lambda_text;
    long long N = 0, catalog = 0;
    double p = 0, gamma = 0;
    std::uint64_t seed = 0;
    std::string weight, out;

    std::string names;
    for (auto n : trsc::kExperimentNames)
        names += (names.empty() ? "" : ", ") + std::string(n);
    app.add_option("experiment", name, "One of: " + names)->required();
    auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override it");
    auto* o_N = app.add_option("--N", N, "Section size");
    auto* o_Ns = app.add_option("--Ns", Ns_text, "Comma separated sizes, e.g. 128,256,...,4096");
    auto* o_p = app.add_option("--p", p, "Exponent p > 1");
    auto* o_gamma = app.add_option("--gamma", gamma, "Riesz exponent gamma > 0");
    auto* o_lambda = app.add_option("--lambda", lambda_text, "Complex parameter as re,im");
    auto* o_seed = app.add_option("--seed", seed, "Random seed");
    auto* o_weight = app.add_option("--weight", weight, "unit, dirichlet or a weight CSV path");
    auto* o_out = app.add_option("--out", out, "Output directory");
    auto* o_catalog = app.add_option("--catalog-size", catalog, "Schur-test catalog size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        trsc::ExperimentConfig config;
        if (*o_config) {
            std::ifstream in(config_path);
            if (!in)
                throw trsc::ConfigError("cannot open config '" + config_path + "'");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw trsc::ConfigError("bad JSON in '" + config_path + "': " + e.what());
            }
            config = trsc::config_from_json(j, config);
        }
        if (*o_N)
            config.N = N;
        if (*o_Ns)
            config.Ns = parse_sizes(Ns_text);
        if (*o_p)
            config.p = p;
        if (*o_gamma)
            config.gamma = gamma;
        if (*o_lambda)
            config.lambda = trsc::parse_lambda(lambda_text);
        if (*o_seed)
            config.seed = seed;
        if (*o_weight)
            config.weight = weight;
        if (*o_out)
            config.out = out;
        if (*o_catalog)
            config.catalog_size = catalog;

        const auto result = trsc::run_experiment(name, config);
        std::cout << (result.pass ? "PASS " : "FAIL ") << result.name << ": " << result.summary << std::endl;
        return result.pass ? 0 : 1;
    } catch (const trsc::ConfigError& e) {
        std::cerr << "trsc: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "trsc: error: " << e.what() << '\n';
        return 1;
    }
}
