#include "aed/service/server.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

#include <httplib.h>

#include "aed/app/config.hpp"
#include "aed/app/results.hpp"

namespace aed::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const std::string& field = {}) {
    json body = {{"error", message}};
    if (!field.empty()) body["field"] = field;
    send_json(res, status, body);
}

struct Cancelled {};

}  // namespace

Service::Service(ServiceOptions options)
    : options_(std::move(options)), store_(options_.data_dir), http_(std::make_unique<httplib::Server>()) {
    if (options_.workers == 0) options_.workers = 1;
    if (options_.jobs_per_worker == 0) {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        options_.jobs_per_worker = std::max(1u, hw / options_.workers);
    }
    register_routes();
    for (const auto& id : store_.queued()) enqueue(id);
    for (unsigned i = 0; i < options_.workers; ++i) {
        workers_.emplace_back([this](std::stop_token st) { worker_loop(st); });
    }
}

Service::~Service() {
    stop();
    for (auto& w : workers_) w.request_stop();
    queue_cv_.notify_all();
    workers_.clear();
}

bool Service::listen(const std::string& host, int port) { return http_->listen(host, port); }

int Service::start_background(const std::string& host) {
    const int port = http_->bind_to_any_port(host);
    if (port < 0) throw std::runtime_error("cannot bind a port");
    http_thread_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
    return port;
}

void Service::stop() {
    stopping_ = true;
    queue_cv_.notify_all();
    if (http_) http_->stop();
    if (http_thread_.joinable()) http_thread_.join();
}

void Service::enqueue(const std::string& id) {
    {
        std::lock_guard lock(queue_mutex_);
        queue_.push_back(id);
    }
    queue_cv_.notify_one();
}

void Service::worker_loop(std::stop_token stop) {
    for (;;) {
        std::string id;
        {
            std::unique_lock lock(queue_mutex_);
            if (!queue_cv_.wait(lock, stop, [&] { return stopping_ || !queue_.empty(); }) ||
                stopping_) {
                return;
            }
            id = std::move(queue_.front());
            queue_.pop_front();
        }
        run_job(id);
    }
}

void Service::run_job(const std::string& id) {
    const auto rec = store_.get(id);
    if (!rec || rec->status != JobStatus::Queued) return;
    store_.mark_running(id);
    try {
        const auto cfg = app::parse_run_config(rec->config);
        const auto total = app::design_work(cfg.design);
        auto done = std::make_shared<std::atomic<std::size_t>>(0);
        sim::Execution exec;
        exec.jobs = options_.jobs_per_worker;
        exec.progress = [this, id, done, total](std::size_t n) {
            if (stopping_) throw Cancelled{};
            const auto d = *done += n;
            store_.set_progress(id, static_cast<double>(d) / static_cast<double>(total));
        };
        const auto points = objective::evaluate_designs(cfg.design, exec);
        const auto rec_out = objective::recommend(points, cfg.design.w);
        store_.mark_done(id, app::design_result_json(rec_out, cfg.w_values()));
    } catch (const Cancelled&) {
    } catch (const std::exception& e) {
        store_.mark_failed(id, e.what());
    }
}

void Service::register_routes() {
    auto& s = *http_;
    s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
    s.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
    });

    s.Get("/api/v1/health", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, {{"status", "ok"}});
    });

    s.Post("/api/v1/jobs", [this](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error& e) {
            send_error(res, 400, std::string("malformed JSON: ") + e.what(), "config");
            return;
        }
        app::RunConfig cfg;
        try {
            cfg = app::parse_run_config(body);
        } catch (const app::ConfigError& e) {
            send_error(res, 400, e.what(), e.field());
            return;
        }
        const auto [id, created] = store_.submit(app::to_json(cfg));
        if (created) enqueue(id);
        const auto rec = store_.get(id);
        send_json(res, created ? 202 : 200,
                  {{"job_id", id},
                   {"status", std::string(to_string(rec->status))},
                   {"cached", !created}});
    });

    s.Get(R"(/api/v1/jobs/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
        const auto rec = store_.get(req.matches[1]);
        if (!rec) return send_error(res, 404, "unknown job");
        send_json(res, 200, rec->to_json());
    });

    s.Get(R"(/api/v1/jobs/([0-9a-f]+)/ecp)", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
        const auto rec = store_.get(req.matches[1]);
        if (!rec) return send_error(res, 404, "unknown job");
        if (rec->status != JobStatus::Done) {
            return send_error(res, 409, "job is " + std::string(to_string(rec->status)));
        }
        if (!req.has_param("w")) return send_error(res, 400, "w is required", "w");
        const auto text = req.get_param_value("w");
        char* end = nullptr;
        const double w = std::strtod(text.c_str(), &end);
        if (text.empty() || *end != '\0' || !std::isfinite(w) || w < 0.0) {
            return send_error(res, 400, "w must be a number >= 0", "w");
        }
        send_json(res, 200, app::ecp_json(app::points_from_json(*rec->result), w));
    });

    s.Get(R"(/api/v1/jobs/([0-9a-f]+)/curves)", [this](const httplib::Request& req,
                                                       httplib::Response& res) {
        const auto rec = store_.get(req.matches[1]);
        if (!rec) return send_error(res, 404, "unknown job");
        if (rec->status != JobStatus::Done) {
            return send_error(res, 409, "job is " + std::string(to_string(rec->status)));
        }
        const auto& r = *rec->result;
        send_json(res, 200,
                  {{"curves", r.at("curves")},
                   {"power_curves", r.at("power_curves")},
                   {"points", r.at("points")}});
    });
}

}  // namespace aed::service
