#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace seqcal {

// tau | plain action | c!d send | c?d receive
enum class ActKind : uint8_t { Tau = 0, Plain = 1, Send = 2, Recv = 3 };

struct Action {
  ActKind kind = ActKind::Tau;
  std::string channel;  // plain name, or channel of a send/receive
  std::string datum;    // send/receive only

  static Action tau() { return Action{}; }
  static Action plain(std::string name) {
    return Action{ActKind::Plain, std::move(name), {}};
  }
  static Action send(std::string chan, std::string dat) {
    return Action{ActKind::Send, std::move(chan), std::move(dat)};
  }
  static Action recv(std::string chan, std::string dat) {
    return Action{ActKind::Recv, std::move(chan), std::move(dat)};
  }

  bool is_tau() const { return kind == ActKind::Tau; }

  bool operator==(const Action&) const = default;
  auto operator<=>(const Action&) const = default;

  std::string str() const {
    switch (kind) {
      case ActKind::Tau: return "tau";
      case ActKind::Plain: return channel;
      case ActKind::Send: return channel + "!" + datum;
      case ActKind::Recv: return channel + "?" + datum;
    }
    return "?";
  }

  // Inverse of str() for .aut labels; unknown shapes fall back to Plain.
  static Action parse_label(const std::string& s) {
    if (s == "tau") return tau();
    auto bang = s.find('!');
    if (bang != std::string::npos)
      return send(s.substr(0, bang), s.substr(bang + 1));
    auto q = s.find('?');
    if (q != std::string::npos)
      return recv(s.substr(0, q), s.substr(q + 1));
    return plain(s);
  }
};

struct ActionHash {
  size_t operator()(const Action& a) const {
    size_t h = std::hash<std::string>{}(a.channel);
    h = h * 31 + std::hash<std::string>{}(a.datum);
    h = h * 31 + static_cast<size_t>(a.kind);
    return h;
  }
};

}  // namespace seqcal
