// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic embedding provider speaking the line protocol on stdin/stdout.
// Vectors match MockEmbeddingProvider for the same 8-bit pixels.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "layercomp/base64.hpp"
#include "layercomp/frame_io.hpp"
#include "layercomp/provider.hpp"

using namespace layercomp;

int main(int argc, char** argv) {
    CLI::App app{"Hash-seeded mock embedding provider"};
    std::size_t dimension = MockEmbeddingProvider::kDefaultDimension;
    std::size_t fail_every = 0;
    app.add_option("--dim", dimension, "Embedding dimension")->check(CLI::PositiveNumber);
    app.add_option("--fail-every", fail_every, "Answer every Nth request with ERR (0 = never)");
    CLI11_PARSE(app, argc, argv);

    std::string line;
    std::size_t count = 0;
    while (std::getline(std::cin, line)) {
        ++count;
        if (fail_every > 0 && count % fail_every == 0) {
            std::cout << "ERR injected failure on request " << count << "\n" << std::flush;
            continue;
        }
        try {
            const auto space = line.find(' ');
            const std::string verb = line.substr(0, space);
            const std::string arg = space == std::string::npos ? "" : line.substr(space + 1);
            std::vector<float> v;
            if (verb == "IMG") {
                const Image8 img = read_png(arg, 3);
                v = MockEmbeddingProvider::image_vector(img.pixels, img.height, img.width, dimension);
            } else if (verb == "TXT") {
                const auto bytes = base64_decode(arg);
                v = MockEmbeddingProvider::text_vector(std::string(bytes.begin(), bytes.end()), dimension);
            } else {
                std::cout << "ERR unknown request '" << verb << "'\n" << std::flush;
                continue;
            }
            std::cout << format_provider_response(v) << "\n" << std::flush;
        } catch (const std::exception& e) {
            std::cout << "ERR " << e.what() << "\n" << std::flush;
        }
    }
    return 0;
}
