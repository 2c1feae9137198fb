#pragma once

#include "generec/generec.h"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace generec_tools {

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::optional<std::filesystem::path> session_dir;
    bool promote = false;
};

// Blocks until stop_server() is called (or a signal handler calls it).
// on_listen receives the bound port before the accept loop starts.
int serve(generec_engine* engine, const ServeOptions& options, const std::function<void(int)>& on_listen);
void stop_server();

}  // namespace generec_tools
