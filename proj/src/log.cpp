// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/log.hpp"

#include <cstdio>
#include <mutex>

#include <nlohmann/json.hpp>
#include <spdlog/sinks/base_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>

namespace layercomp {
namespace {

// One JSON object per record; message text is escaped by the JSON serializer.
class JsonLinesSink final : public spdlog::sinks::base_sink<std::mutex> {
protected:
    void sink_it_(const spdlog::details::log_msg& msg) override {
        nlohmann::json record = {
            {"level", std::string(spdlog::level::to_string_view(msg.level).data(), spdlog::level::to_string_view(msg.level).size())},
            {"logger", std::string(msg.logger_name.data(), msg.logger_name.size())},
            {"msg", std::string(msg.payload.data(), msg.payload.size())},
        };
        std::string line = record.dump() + "\n";
        std::fwrite(line.data(), 1, line.size(), stderr);
    }

    void flush_() override { std::fflush(stderr); }
};

std::shared_ptr<spdlog::logger> make_logger(bool json) {
    spdlog::sink_ptr sink;
    if (json) {
        sink = std::make_shared<JsonLinesSink>();
    } else {
        sink = std::make_shared<spdlog::sinks::stderr_color_sink_mt>();
        sink->set_pattern("[%l] %v");
    }
    return std::make_shared<spdlog::logger>("layercomp", std::move(sink));
}

std::shared_ptr<spdlog::logger>& instance() {
    static std::shared_ptr<spdlog::logger> logger = [] {
        auto l = make_logger(false);
        l->set_level(spdlog::level::warn);
        return l;
    }();
    return logger;
}

}  // namespace

spdlog::logger& log() { return *instance(); }

void configure_logging(spdlog::level::level_enum level, bool json) {
    auto logger = make_logger(json);
    logger->set_level(level);
    instance() = std::move(logger);
}

}  // namespace layercomp
