// Command-line front end. Links only the C API.
#include "generec/generec.h"
#include "server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

int exit_code(generec_status st)
{
    switch (st) {
    case GENEREC_OK: return 0;
    case GENEREC_ERR_CONFIG:
    case GENEREC_ERR_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitData;
    }
}

int report_failure(generec_status st)
{
    std::cerr << "error: " << generec_status_name(st) << ": " << generec_last_error() << "\n";
    return exit_code(st);
}

// Owns a string returned by the C API.
struct CString {
    char* p = nullptr;
    ~CString() { generec_free(p); }
    const char* get() const { return p ? p : ""; }
};

bool write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::trunc);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return bool(out);
}

struct Globals {
    std::string config_path;
    uint64_t seed = 0;
    std::string out;
    std::string config_text;
};

// --config accepts a file path or inline JSON.
bool load_config(Globals& g)
{
    if (g.config_path.empty()) return true;
    if (g.config_path.front() == '{') {
        g.config_text = g.config_path;
        return true;
    }
    std::ifstream in(g.config_path);
    if (!in) {
        std::cerr << "error: cannot read config '" << g.config_path << "'\n";
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    g.config_text = ss.str();
    return true;
}

int run_serve(const Globals& g, const std::string& manifest, const std::string& scorer,
              generec_tools::ServeOptions options)
{
    generec_engine* engine = nullptr;
    const generec_status st = generec_engine_open(manifest.c_str(), scorer.empty() ? nullptr : scorer.c_str(),
                                                  g.config_text.c_str(), g.seed, &engine);
    if (st != GENEREC_OK) return report_failure(st);

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::thread waiter([signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        generec_tools::stop_server();
    });
    waiter.detach();

    const int rc = generec_tools::serve(engine, options, [&](int port) {
        std::cout << "listening on http://" << options.host << ":" << port << std::endl;
    });
    generec_engine_close(engine);
    return rc;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Generative recommender toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "JSON config file (or inline JSON object)");
    app.add_option("--seed", g.seed, "Master seed; non-zero overrides every seed in the config");
    app.add_option("--out", g.out, "Output path");
    app.set_version_flag("--version", std::string(generec_version()));

    auto* synth = app.add_subcommand("synth", "Generate a planted-cluster corpus");

    auto* train = app.add_subcommand("train", "Train the preference scorer");
    std::string train_manifest;
    train->add_option("manifest", train_manifest, "Corpus manifest.json")->required();

    auto* exp = app.add_subcommand("exp", "Run an experiment (thumbnail | clip | revise | create)");
    std::string exp_kind, exp_manifest, exp_scorer;
    exp->add_option("kind", exp_kind)->required();
    exp->add_option("manifest", exp_manifest, "Corpus manifest.json")->required();
    exp->add_option("--scorer", exp_scorer, "Scorer prefix written by train");

    auto* fvd = app.add_subcommand("fvd", "Frechet distance between two item sets");
    std::string set_a, set_b;
    fvd->add_option("setA", set_a)->required();
    fvd->add_option("setB", set_b)->required();

    auto* serve = app.add_subcommand("serve", "HTTP service for interactive sessions");
    std::string serve_manifest, serve_scorer, session_dir;
    generec_tools::ServeOptions options;
    serve->add_option("manifest", serve_manifest, "Corpus manifest.json")->required();
    serve->add_option("--scorer", serve_scorer, "Scorer prefix written by train");
    serve->add_option("--host", options.host);
    serve->add_option("--port", options.port, "0 picks a free port")->check(CLI::Range(0, 65535));
    serve->add_option("--session-dir", session_dir, "Save sessions here on shutdown");
    serve->add_flag("--promote", options.promote, "Also write corpus + passing generated items per session");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    if (!load_config(g)) return kExitConfig;
    const char* cfg = g.config_text.c_str();

    CString json, tsv;
    generec_status st = GENEREC_OK;

    if (*synth) {
        const std::string out = g.out.empty() ? "data" : g.out;
        st = generec_synth(cfg, g.seed, out.c_str(), &json.p);
    } else if (*train) {
        const std::string out = g.out.empty() ? "scorer" : g.out;
        st = generec_train(train_manifest.c_str(), cfg, g.seed, out.c_str(), &json.p);
    } else if (*exp) {
        st = generec_experiment(exp_kind.c_str(), exp_manifest.c_str(), exp_scorer.empty() ? nullptr : exp_scorer.c_str(),
                                cfg, g.seed, &json.p, &tsv.p);
        if (st == GENEREC_OK) {
            std::cout << tsv.get();
            const std::string out = g.out.empty() ? "report_" + exp_kind + ".json" : g.out;
            if (!write_text(out, json.get())) {
                std::cerr << "error: cannot write '" << out << "'\n";
                return kExitData;
            }
            return 0;
        }
    } else if (*fvd) {
        double value = 0;
        st = generec_fvd(set_a.c_str(), set_b.c_str(), cfg, &value, &json.p);
    } else if (*serve) {
        if (!session_dir.empty()) options.session_dir = session_dir;
        return run_serve(g, serve_manifest, serve_scorer, options);
    }

    if (st != GENEREC_OK) return report_failure(st);
    if (!g.out.empty() && *fvd) {
        if (!write_text(g.out, json.get())) return kExitData;
    }
    std::cout << json.get() << "\n";
    return 0;
}
