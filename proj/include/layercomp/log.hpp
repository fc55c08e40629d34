// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include <spdlog/spdlog.h>

namespace layercomp {

/// Shared library logger (stderr). Created on first use.
spdlog::logger& log();

/// Reconfigures the shared logger. With json=true each record is one JSON object per line.
void configure_logging(spdlog::level::level_enum level, bool json);

}  // namespace layercomp
