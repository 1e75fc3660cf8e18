// HTTP service for design jobs.  No authentication; meant for a local tool,
// not a multi-tenant deployment.

#include <csignal>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "aed/service/server.hpp"

namespace {
aed::service::Service* g_service = nullptr;
void on_signal(int) {
    if (g_service) g_service->stop();
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive experiment design service"};
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string data_dir = "aed-data";
    unsigned workers = 1;
    unsigned jobs = 0;
    app.add_option("--port", port, "Listen port");
    app.add_option("--host", host, "Listen address");
    app.add_option("--data-dir", data_dir, "Directory of persisted job records");
    app.add_option("--workers", workers, "Jobs run concurrently")->check(CLI::PositiveNumber);
    app.add_option("--jobs", jobs, "Simulation threads per job; 0 = cores / workers");
    CLI11_PARSE(app, argc, argv);

    aed::service::Service service({data_dir, workers, jobs});
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::fprintf(stderr, "listening on %s:%d, data in %s\n", host.c_str(), port, data_dir.c_str());
    if (!service.listen(host, port)) {
        std::fprintf(stderr, "cannot listen on %s:%d\n", host.c_str(), port);
        return 1;
    }
    return 0;
}
