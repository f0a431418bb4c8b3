// core/src/external_codec.cc

// Copyright 2026  The codec-probe Authors

// See the top-level LICENSE file for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "codec_probe/codec.h"
#include "codec_probe/error.h"
#include "codec_probe/wav_io.h"

extern char **environ;

namespace codec_probe {

namespace fs = std::filesystem;

namespace {

/// Removes its paths on destruction, whatever happened in between.
class TempFiles {
 public:
  TempFiles() = default;
  TempFiles(const TempFiles &) = delete;
  TempFiles &operator=(const TempFiles &) = delete;
  ~TempFiles() {
    for (const auto &p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  fs::path Add(fs::path p) {
    paths_.push_back(p);
    return p;
  }

 private:
  std::vector<fs::path> paths_;
};

fs::path ExchangeDir() {
  if (const char *env = std::getenv("CODEC_PROBE_TMPDIR"); env && *env) {
    fs::path dir(env);
    std::error_code ec;
    fs::create_directories(dir, ec);
    return fs::absolute(dir);
  }
  return fs::temp_directory_path();
}

std::string UniqueStem() {
  static std::atomic<std::uint64_t> counter{0};
  auto now = std::chrono::steady_clock::now().time_since_epoch().count();
  std::ostringstream os;
  os << "codec-probe-" << ::getpid() << "-" << counter.fetch_add(1) << "-"
     << std::hex << (static_cast<std::uint64_t>(now) & 0xFFFFFF);
  return os.str();
}

void ReplaceAll(std::string *s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s->find(from, pos)) != std::string::npos) {
    s->replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string ReadFile(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct ChildResult {
  int exit_status = 0;
  bool timed_out = false;
  bool signaled = false;
};

ChildResult RunShell(const std::string &command, std::string_view mode,
                     const fs::path &stderr_path, double timeout_seconds) {
  // Everything the child touches is prepared before fork: only
  // async-signal-safe calls happen between fork and exec.
  std::vector<std::string> env_storage;
  for (char **e = environ; e && *e; ++e) {
    if (std::strncmp(*e, "CODEC_PROBE_MODE=", 17) != 0)
      env_storage.emplace_back(*e);
  }
  env_storage.push_back("CODEC_PROBE_MODE=" + std::string(mode));
  std::vector<char *> envp;
  for (auto &s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);
  std::string shell = "/bin/sh", dash_c = "-c", cmd = command;
  char *argv[] = {shell.data(), dash_c.data(), cmd.data(), nullptr};

  int err_fd = ::open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (err_fd < 0)
    throw Error(Errc::kSpawnFailure, "cannot open stderr capture file");
  int null_fd = ::open("/dev/null", O_RDWR);

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(err_fd);
    if (null_fd >= 0) ::close(null_fd);
    throw Error(Errc::kSpawnFailure,
                std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    if (null_fd >= 0) {
      ::dup2(null_fd, STDIN_FILENO);
      ::dup2(null_fd, STDOUT_FILENO);
    }
    ::dup2(err_fd, STDERR_FILENO);
    ::execve(shell.c_str(), argv, envp.data());
    ::_exit(127);
  }
  ::close(err_fd);
  if (null_fd >= 0) ::close(null_fd);

  ChildResult result;
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration<double>(timeout_seconds);
  int status = 0;
  auto sleep_for = std::chrono::microseconds(200);
  for (;;) {
    pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR)
      throw Error(Errc::kSpawnFailure, "waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.timed_out = true;
      return result;
    }
    std::this_thread::sleep_for(sleep_for);
    sleep_for = std::min(sleep_for * 2, std::chrono::microseconds(20000));
  }
  if (WIFEXITED(status)) {
    result.exit_status = WEXITSTATUS(status);
  } else {
    result.signaled = true;
    result.exit_status = WIFSIGNALED(status) ? 128 + WTERMSIG(status) : -1;
  }
  return result;
}

class ExternalCodec : public Codec {
 public:
  ExternalCodec(CodecDescriptor d, LogSink log)
      : Codec(std::move(d)), log_(std::move(log)) {}

 private:
  std::vector<double> Run(const Waveform &w,
                          const BitrateMode &mode) const override {
    std::string captured;
    auto out = InvokeExternal(descriptor(), w, mode.id, &captured);
    if (log_ && !captured.empty()) log_(captured);
    return out;
  }
  LogSink log_;
};

}  // namespace

std::vector<double> InvokeExternal(const CodecDescriptor &descriptor,
                                   const Waveform &w, std::string_view mode,
                                   std::string *captured_stderr) {
  if (descriptor.command_template.empty())
    throw Error(Errc::kInvalidArgument,
                descriptor.name + " has no command template");
  if (w.sample_rate() != descriptor.native_rate)
    throw Error(Errc::kRateMismatch,
                descriptor.name + " expects " +
                    std::to_string(descriptor.native_rate) + " Hz");

  TempFiles temps;
  const fs::path dir = ExchangeDir();
  const std::string stem = UniqueStem();
  const fs::path input = temps.Add(dir / (stem + "-in.wav"));
  const fs::path output = temps.Add(dir / (stem + "-out.wav"));
  const fs::path err = temps.Add(dir / (stem + "-stderr.txt"));

  WriteWav(w, input, WavEncoding::kFloat32);
  std::string command = descriptor.command_template;
  ReplaceAll(&command, "{input}", input.string());
  ReplaceAll(&command, "{output}", output.string());
  ReplaceAll(&command, "{mode}", mode);

  ChildResult r = RunShell(command, mode, err, descriptor.timeout_seconds);
  std::string stderr_text = ReadFile(err);
  if (captured_stderr) *captured_stderr = stderr_text;
  if (r.timed_out)
    throw Error(Errc::kTimeout,
                descriptor.name + " exceeded " +
                    std::to_string(descriptor.timeout_seconds) + " s");
  if (r.exit_status == 127 && !r.signaled)
    throw Error(Errc::kSpawnFailure,
                descriptor.name + ": command could not be executed: " +
                    stderr_text);
  if (r.exit_status != 0)
    throw Error(Errc::kCodecCrashed,
                descriptor.name + " exited with status " +
                    std::to_string(r.exit_status) + "; stderr: " + stderr_text);

  RawAudio audio;
  try {
    audio = ReadWavRaw(output);
  } catch (const Error &e) {
    throw Error(Errc::kMalformedOutput, descriptor.name + ": " + e.what());
  }
  if (audio.sample_rate != descriptor.native_rate)
    throw Error(Errc::kMalformedOutput,
                descriptor.name + " wrote " +
                    std::to_string(audio.sample_rate) + " Hz, expected " +
                    std::to_string(descriptor.native_rate));
  return std::move(audio.samples);
}

CodecPtr MakeExternalCodec(CodecDescriptor descriptor, LogSink log) {
  descriptor.kind = CodecKind::kExternal;
  if (descriptor.command_template.empty())
    throw Error(Errc::kInvalidArgument,
                descriptor.name + ": external codec needs a command");
  if (descriptor.bitrate_modes.empty())
    descriptor.bitrate_modes.push_back({std::string(kDefaultMode), 0.0});
  return std::make_shared<ExternalCodec>(std::move(descriptor), std::move(log));
}

}  // namespace codec_probe
