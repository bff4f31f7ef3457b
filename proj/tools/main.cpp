#include "cli.hpp"

#include <csignal>
#include <iostream>

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_sigint);
    std::signal(SIGTERM, on_sigint);
    fire::cli::Context ctx;
    ctx.env = fire::cli::process_environment();
    ctx.stop = &g_stop;
    std::vector<std::string> args(argv + 1, argv + argc);
    return fire::cli::run_cli(args, ctx, std::cout, std::cerr);
}
