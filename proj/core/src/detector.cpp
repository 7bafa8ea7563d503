#include "gvp/detector.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gvp/errors.hpp"
#include "gvp/geometry.hpp"

using ordered_json = nlohmann::ordered_json;

namespace gvp::detect {

namespace {

FrameRecord parse_record(const std::string& line, int lineno,
                         const char* origin) {
  char buf[192];
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& ex) {
    std::snprintf(buf, sizeof(buf), "%s:%d: %s", origin, lineno, ex.what());
    raise(Errc::parse_error, buf);
  }
  FrameRecord rec;
  try {
    rec.frame_id = j.at("frame_id").get<std::string>();
    if (rec.frame_id.empty()) throw std::runtime_error("empty frame_id");
    if (!j.at("ts").is_number_integer())
      throw std::runtime_error("ts must be an integer");
    rec.ts = j.at("ts").get<std::int64_t>();
    for (const auto& b : j.at("boxes")) {
      Detection d;
      d.box = BBox{b.at("x").get<double>(), b.at("y").get<double>(),
                   b.at("w").get<double>(), b.at("h").get<double>()};
      d.confidence = b.at("conf").get<double>();
      d.class_id = b.at("cls").get<int>();
      if (d.box.w < 0 || d.box.h < 0)
        throw std::runtime_error("negative box dimensions");
      if (d.confidence < 0 || d.confidence > 1)
        throw std::runtime_error("confidence outside [0,1]");
      rec.detections.push_back(d);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    std::snprintf(buf, sizeof(buf), "%s:%d: %s", origin, lineno, ex.what());
    raise(Errc::parse_error, buf);
  }
  return rec;
}

DetectionStream parse_stream(std::istream& in, const char* origin) {
  DetectionStream stream;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    FrameRecord rec = parse_record(line, lineno, origin);
    if (!stream.frames.empty()) {
      const FrameRecord& prev = stream.frames.back();
      if (rec.ts <= prev.ts) {
        char buf[192];
        std::snprintf(buf, sizeof(buf),
                      "%s:%d: ts %lld does not increase past %lld", origin,
                      lineno, static_cast<long long>(rec.ts),
                      static_cast<long long>(prev.ts));
        raise(Errc::non_monotonic_timestamps, buf);
      }
    }
    stream.frames.push_back(std::move(rec));
  }
  // frame ids must be unique even where timestamps already differ
  std::vector<std::string> ids;
  ids.reserve(stream.frames.size());
  for (const FrameRecord& r : stream.frames) ids.push_back(r.frame_id);
  std::sort(ids.begin(), ids.end());
  auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end())
    raise(Errc::duplicate_frame_id, "duplicate frame_id " + *dup);
  return stream;
}

}  // namespace

DetectionStream load_detections(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open detections file: " + path);
  return parse_stream(in, path.c_str());
}

void write_detections(const std::string& path, const DetectionStream& stream) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write detections file: " + path);
  for (const FrameRecord& rec : stream.frames) {
    ordered_json j;
    j["frame_id"] = rec.frame_id;
    j["ts"] = rec.ts;
    ordered_json boxes = ordered_json::array();
    for (const Detection& d : rec.detections) {
      boxes.push_back(ordered_json{{"x", d.box.x},
                                   {"y", d.box.y},
                                   {"w", d.box.w},
                                   {"h", d.box.h},
                                   {"conf", d.confidence},
                                   {"cls", d.class_id}});
    }
    j["boxes"] = std::move(boxes);
    out << j.dump() << '\n';
  }
}

namespace {

struct ScopedSigpipeIgnore {
  struct sigaction saved {};
  ScopedSigpipeIgnore() {
    struct sigaction ign {};
    ign.sa_handler = SIG_IGN;
    sigaction(SIGPIPE, &ign, &saved);
  }
  ~ScopedSigpipeIgnore() { sigaction(SIGPIPE, &saved, nullptr); }
};

void set_nonblocking(int fd) {
  fcntl(fd, F_SETFL, fcntl(fd, F_GETFL, 0) | O_NONBLOCK);
}

}  // namespace

DetectionStream run_adapter(const DetectorConfig& cfg,
                            std::span<const std::string> frame_paths) {
  if (cfg.adapter_cmd.empty())
    raise(Errc::invalid_config, "adapter_cmd is not set");

  int to_child[2], from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0)
    raise(Errc::io_error, "pipe() failed");

  const pid_t pid = fork();
  if (pid < 0) raise(Errc::io_error, "fork() failed");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", cfg.adapter_cmd.c_str(),
          static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);

  std::string input;
  for (const std::string& p : frame_paths) {
    input += p;
    input += '\n';
  }

  ScopedSigpipeIgnore sigpipe_guard;
  set_nonblocking(to_child[1]);
  set_nonblocking(from_child[0]);

  // Interleave writing paths and draining stdout so neither pipe stalls.
  std::string output;
  std::size_t written = 0;
  bool write_open = true, read_open = true;
  char buf[65536];
  while (write_open || read_open) {
    struct pollfd fds[2];
    int nfds = 0;
    int write_idx = -1, read_idx = -1;
    if (write_open) {
      write_idx = nfds;
      fds[nfds++] = {to_child[1], POLLOUT, 0};
    }
    if (read_open) {
      read_idx = nfds;
      fds[nfds++] = {from_child[0], POLLIN, 0};
    }
    if (poll(fds, nfds, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (write_idx >= 0 && (fds[write_idx].revents & (POLLOUT | POLLERR))) {
      if (written == input.size()) {
        close(to_child[1]);
        write_open = false;
      } else {
        const ssize_t n = write(to_child[1], input.data() + written,
                                input.size() - written);
        if (n > 0) {
          written += static_cast<std::size_t>(n);
          if (written == input.size()) {
            close(to_child[1]);
            write_open = false;
          }
        } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
          close(to_child[1]);  // adapter closed stdin early
          write_open = false;
        }
      }
    }
    if (read_idx >= 0 &&
        (fds[read_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      const ssize_t n = read(from_child[0], buf, sizeof(buf));
      if (n > 0) {
        output.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
        close(from_child[0]);
        read_open = false;
      }
    }
  }
  if (write_open) close(to_child[1]);
  if (read_open) close(from_child[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    char msg[96];
    if (WIFEXITED(status))
      std::snprintf(msg, sizeof(msg), "adapter exited with code %d",
                    WEXITSTATUS(status));
    else
      std::snprintf(msg, sizeof(msg), "adapter killed by signal %d",
                    WIFSIGNALED(status) ? WTERMSIG(status) : 0);
    raise(Errc::adapter_crashed, msg);
  }

  std::istringstream out_stream(output);
  DetectionStream stream = parse_stream(out_stream, "adapter stdout");
  if (stream.frames.size() != frame_paths.size()) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "adapter emitted %zu records for %zu frames",
                  stream.frames.size(), frame_paths.size());
    raise(Errc::protocol_violation, msg);
  }
  for (std::size_t i = 0; i < frame_paths.size(); ++i) {
    const std::string stem =
        std::filesystem::path(frame_paths[i]).stem().string();
    if (stream.frames[i].frame_id != stem)
      raise(Errc::protocol_violation,
            "record " + std::to_string(i + 1) + " is for frame '" +
                stream.frames[i].frame_id + "', expected '" + stem + "'");
  }
  return stream;
}

std::vector<Detection> nms(std::span<const Detection> dets,
                           double iou_threshold) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].confidence > dets[b].confidence;
                   });
  std::vector<bool> keep(dets.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool suppressed = false;
    for (std::size_t k : kept) {
      if (dets[k].class_id != dets[idx].class_id) continue;
      if (iou(dets[k].box, dets[idx].box) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      keep[idx] = true;
      kept.push_back(idx);
    }
  }
  std::vector<Detection> out;
  out.reserve(kept.size());
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (keep[i]) out.push_back(dets[i]);
  return out;
}

std::vector<Detection> apply_config(std::span<const Detection> dets,
                                    const DetectorConfig& cfg) {
  std::vector<Detection> filtered;
  filtered.reserve(dets.size());
  for (const Detection& d : dets) {
    if (d.confidence < cfg.confidence_threshold) continue;
    if (cfg.class_filter && !cfg.class_filter->count(d.class_id)) continue;
    filtered.push_back(d);
  }
  return nms(filtered, cfg.nms_iou_threshold);
}

int waste_count(const FrameRecord& rec, const DetectorConfig& cfg) {
  int n = 0;
  for (const Detection& d : apply_config(rec.detections, cfg))
    if (d.class_id == kWasteClass) ++n;
  return n;
}

}  // namespace gvp::detect
