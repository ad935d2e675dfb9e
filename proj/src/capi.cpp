#include "nehari.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "nehari/runner.hpp"

namespace {

thread_local std::string g_last_error;

nehari_status status_from(nehari::ErrorCode code) {
    using EC = nehari::ErrorCode;
    switch (code) {
        case EC::ok: return NEHARI_OK;
        case EC::invalid_argument: return NEHARI_ERR_INVALID_ARGUMENT;
        case EC::invalid_geometry: return NEHARI_ERR_INVALID_GEOMETRY;
        case EC::degenerate_domain: return NEHARI_ERR_DEGENERATE_DOMAIN;
        case EC::resource_limit: return NEHARI_ERR_RESOURCE_LIMIT;
        case EC::no_convergence: return NEHARI_ERR_NO_CONVERGENCE;
        case EC::nodal_collapse: return NEHARI_ERR_NODAL_COLLAPSE;
        case EC::dimension_mismatch: return NEHARI_ERR_DIMENSION_MISMATCH;
        case EC::io_error: return NEHARI_ERR_IO;
        case EC::parse_error: return NEHARI_ERR_PARSE;
        case EC::underflow: return NEHARI_ERR_UNDERFLOW;
    }
    return NEHARI_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
nehari_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return NEHARI_OK;
    } catch (const nehari::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NEHARI_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return NEHARI_ERR_INTERNAL;
    }
}

} // namespace

struct nehari_config {
    std::string text;
    std::vector<std::string> overrides;
    nehari::RunConfig resolved;

    void reparse() { resolved = nehari::parse_config(text, overrides); }
};

extern "C" {

nehari_status nehari_config_parse_string(const char* text, nehari_config** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return NEHARI_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        auto cfg = std::make_unique<nehari_config>();
        cfg->text = text;
        cfg->reparse();
        *out = cfg.release();
    });
}

nehari_status nehari_config_parse_file(const char* path, nehari_config** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return NEHARI_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw nehari::Error(nehari::ErrorCode::io_error,
                                std::string("cannot open config '") + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        auto cfg = std::make_unique<nehari_config>();
        cfg->text = ss.str();
        cfg->reparse();
        *out = cfg.release();
    });
}

nehari_status nehari_config_override(nehari_config* cfg, const char* key_equals_value) {
    if (!cfg || !key_equals_value) {
        g_last_error = "null argument";
        return NEHARI_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        cfg->overrides.emplace_back(key_equals_value);
        try {
            cfg->reparse();
        } catch (...) {
            cfg->overrides.pop_back();
            throw;
        }
    });
}

void nehari_config_free(nehari_config* cfg) { delete cfg; }

nehari_status nehari_run(const nehari_config* cfg, const char* command, const char* out_dir,
                         char** report_json_out, int* exit_code_out) {
    if (!cfg || !command || !out_dir) {
        g_last_error = "null argument";
        return NEHARI_ERR_INVALID_ARGUMENT;
    }
    if (report_json_out) *report_json_out = nullptr;
    if (exit_code_out) *exit_code_out = 2;
    return guarded([&] {
        nehari::RunResult res = nehari::run_command(command, cfg->resolved, out_dir);
        if (report_json_out) *report_json_out = dup_string(res.report_json);
        if (exit_code_out) *exit_code_out = res.exit_code;
    });
}

void nehari_string_free(char* s) { std::free(s); }

const char* nehari_last_error(void) { return g_last_error.c_str(); }

const char* nehari_status_name(nehari_status status) {
    switch (status) {
        case NEHARI_OK: return "ok";
        case NEHARI_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case NEHARI_ERR_INVALID_GEOMETRY: return "invalid_geometry";
        case NEHARI_ERR_DEGENERATE_DOMAIN: return "degenerate_domain";
        case NEHARI_ERR_RESOURCE_LIMIT: return "resource_limit";
        case NEHARI_ERR_NO_CONVERGENCE: return "no_convergence";
        case NEHARI_ERR_NODAL_COLLAPSE: return "nodal_collapse";
        case NEHARI_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case NEHARI_ERR_IO: return "io_error";
        case NEHARI_ERR_PARSE: return "parse_error";
        case NEHARI_ERR_UNDERFLOW: return "underflow";
        case NEHARI_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

int nehari_status_exit_code(nehari_status status) {
    switch (status) {
        case NEHARI_OK: return 0;
        case NEHARI_ERR_NO_CONVERGENCE:
        case NEHARI_ERR_NODAL_COLLAPSE: return 1;
        default: return 2;
    }
}

const char* nehari_version(void) { return "0.1.0"; }

} // extern "C"
