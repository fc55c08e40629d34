// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/provider.hpp"

#include <cerrno>
#include <cstring>
#include <sstream>

#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "layercomp/base64.hpp"
#include "layercomp/frame_io.hpp"
#include "layercomp/log.hpp"
#include "layercomp/rng.hpp"

extern char** environ;

namespace layercomp {

EmbeddingVector EmbeddingProvider::embed_text(const std::string&) {
    throw ProviderError(identity() + ": text embeddings are not supported");
}

namespace {

std::vector<float> gaussian_vector(std::uint64_t seed, std::size_t dimension) {
    Rng rng(seed);
    std::vector<float> v(dimension);
    for (auto& x : v) {
        x = static_cast<float>(rng.normal());
    }
    return v;
}

}  // namespace

std::string MockEmbeddingProvider::identity() const { return "mock-hash-v1/" + std::to_string(m_dimension); }

std::vector<float> MockEmbeddingProvider::image_vector(std::span<const std::uint8_t> rgb8, std::size_t height,
                                                       std::size_t width, std::size_t dimension) {
    const std::uint64_t dims[2] = {height, width};
    std::uint64_t h = fnv1a64("IMG", 3);
    h = fnv1a64(dims, sizeof(dims), h);
    h = fnv1a64(rgb8.data(), rgb8.size(), h);
    return gaussian_vector(h, dimension);
}

std::vector<float> MockEmbeddingProvider::text_vector(const std::string& text, std::size_t dimension) {
    std::uint64_t h = fnv1a64("TXT", 3);
    h = fnv1a64(text.data(), text.size(), h);
    return gaussian_vector(h, dimension);
}

EmbeddingVector MockEmbeddingProvider::embed_image(const RgbFrameView& frame) {
    std::vector<std::uint8_t> bytes(frame.pixels.size());
    std::transform(frame.pixels.begin(), frame.pixels.end(), bytes.begin(), quantize8);
    return EmbeddingVector::normalized(image_vector(bytes, frame.height, frame.width, m_dimension));
}

EmbeddingVector MockEmbeddingProvider::embed_text(const std::string& text) {
    return EmbeddingVector::normalized(text_vector(text, m_dimension));
}

EmbeddingVector parse_provider_response(const std::string& line) {
    std::istringstream in(line);
    std::string status;
    in >> status;
    if (status == "ERR") {
        std::string message;
        std::getline(in >> std::ws, message);
        throw ProviderError("provider error: " + message);
    }
    if (status != "OK") {
        throw ProviderError("malformed provider response: '" + line.substr(0, 80) + "'");
    }
    long long dimension = 0;
    std::string payload;
    if (!(in >> dimension >> payload) || dimension <= 0) {
        throw ProviderError("malformed provider response: expected 'OK <D> <base64>'");
    }
    std::vector<std::uint8_t> bytes;
    try {
        bytes = base64_decode(payload);
    } catch (const ValidationError& e) {
        throw ProviderError(std::string("malformed provider payload: ") + e.what());
    }
    if (bytes.size() != static_cast<std::size_t>(dimension) * 4) {
        throw ProviderError("provider payload has " + std::to_string(bytes.size()) + " bytes, expected " +
                            std::to_string(dimension * 4));
    }
    std::vector<float> values(static_cast<std::size_t>(dimension));
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint32_t bits = static_cast<std::uint32_t>(bytes[4 * i]) |
                                   (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                                   (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                                   (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
        std::memcpy(&values[i], &bits, sizeof(float));
    }
    try {
        return EmbeddingVector::normalized(std::move(values));
    } catch (const ValidationError& e) {
        throw ProviderError(std::string("unusable provider embedding: ") + e.what());
    }
}

std::string format_provider_response(std::span<const float> values) {
    std::vector<std::uint8_t> bytes(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint32_t bits = 0;
        std::memcpy(&bits, &values[i], sizeof(float));
        for (std::size_t b = 0; b < 4; ++b) {
            bytes[4 * i + b] = static_cast<std::uint8_t>(bits >> (8 * b));
        }
    }
    return "OK " + std::to_string(values.size()) + " " + base64_encode(bytes);
}

// Child process connected through a socket pair, so writes to a dead child fail with EPIPE
// (MSG_NOSIGNAL) instead of raising SIGPIPE.
struct ProcessEmbeddingProvider::Process {
    pid_t pid = -1;
    int fd = -1;
    std::string buffer;

    explicit Process(const std::string& command) {
        int fds[2];
        if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
            throw ProviderError(std::string("socketpair failed: ") + std::strerror(errno));
        }
        posix_spawn_file_actions_t actions;
        posix_spawn_file_actions_init(&actions);
        posix_spawn_file_actions_adddup2(&actions, fds[1], STDIN_FILENO);
        posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
        const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
        const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, const_cast<char**>(argv), environ);
        posix_spawn_file_actions_destroy(&actions);
        ::close(fds[1]);
        if (rc != 0) {
            ::close(fds[0]);
            throw ProviderError("cannot start provider '" + command + "': " + std::strerror(rc));
        }
        fd = fds[0];
    }

    ~Process() {
        if (fd >= 0) {
            ::shutdown(fd, SHUT_WR);
            ::close(fd);
        }
        if (pid > 0) {
            int status = 0;
            ::waitpid(pid, &status, 0);
        }
    }

    void write_line(const std::string& line) {
        std::string data = line + "\n";
        std::size_t sent = 0;
        while (sent < data.size()) {
            const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) {
                    continue;
                }
                throw ProviderError(std::string("provider write failed: ") + std::strerror(errno));
            }
            sent += static_cast<std::size_t>(n);
        }
    }

    std::string read_line() {
        for (;;) {
            if (auto pos = buffer.find('\n'); pos != std::string::npos) {
                std::string line = buffer.substr(0, pos);
                buffer.erase(0, pos + 1);
                if (!line.empty() && line.back() == '\r') {
                    line.pop_back();
                }
                return line;
            }
            char chunk[4096];
            const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
            if (n < 0 && errno == EINTR) {
                continue;
            }
            if (n <= 0) {
                throw ProviderError("provider closed its output");
            }
            buffer.append(chunk, static_cast<std::size_t>(n));
        }
    }
};

ProcessEmbeddingProvider::ProcessEmbeddingProvider(std::string command) : m_command(std::move(command)) {
    m_process = std::make_unique<Process>(m_command);
    std::string pattern = (std::filesystem::temp_directory_path() / "layercomp-provider-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) {
        throw ProviderError(std::string("cannot create scratch directory: ") + std::strerror(errno));
    }
    m_scratch = pattern;
}

ProcessEmbeddingProvider::~ProcessEmbeddingProvider() {
    m_process.reset();
    std::error_code ec;
    std::filesystem::remove_all(m_scratch, ec);
}

std::string ProcessEmbeddingProvider::identity() const { return "process:" + m_command; }

EmbeddingVector ProcessEmbeddingProvider::request(const std::string& line) {
    m_process->write_line(line);
    return parse_provider_response(m_process->read_line());
}

EmbeddingVector ProcessEmbeddingProvider::embed_image(const RgbFrameView& frame) {
    Image8 img{frame.height, frame.width, 3, std::vector<std::uint8_t>(frame.pixels.size())};
    std::transform(frame.pixels.begin(), frame.pixels.end(), img.pixels.begin(), quantize8);
    const auto path = m_scratch / ("frame_" + std::to_string(m_counter++) + ".png");
    write_png(path, img);
    try {
        auto e = request("IMG " + path.string());
        std::filesystem::remove(path);
        return e;
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw;
    }
}

EmbeddingVector ProcessEmbeddingProvider::embed_text(const std::string& text) {
    return request("TXT " + base64_encode(text));
}

std::unique_ptr<EmbeddingProvider> make_provider(const std::string& spec) {
    if (spec == "builtin:mock") {
        return std::make_unique<MockEmbeddingProvider>();
    }
    return std::make_unique<ProcessEmbeddingProvider>(spec);
}

}  // namespace layercomp
