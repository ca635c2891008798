#include "padyn/padyn.h"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "padyn/bounds.hpp"
#include "padyn/report.hpp"

struct padyn_session {
  padyn::MapDescription desc;
  padyn::RunOptions opts;
};

namespace {

thread_local std::string last_error;

padyn_status fail(padyn_status st, const std::string& msg) {
  last_error = msg;
  return st;
}

padyn_status from_exit(padyn::ExitCode c) { return static_cast<padyn_status>(static_cast<int>(c)); }

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
padyn_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const padyn::Error& e) {
    return fail(from_exit(padyn::exit_code_for(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PADYN_PRECISION, "out of memory");
  } catch (const std::exception& e) {
    return fail(PADYN_PRECISION, e.what());
  }
}

int to_int(const char* v) {
  int x = 0;
  const char* end = v + std::strlen(v);
  const auto [ptr, ec] = std::from_chars(v, end, x);
  if (ec != std::errc() || ptr != end || ptr == v) throw padyn::Error(padyn::ErrorCode::InvalidArgument, std::string("not an integer: ") + v);
  return x;
}

padyn_status open_with(padyn::MapDescription d, padyn_session** out) {
  (void)padyn::build_model(d);  // reject bad expressions up front
  *out = new padyn_session{std::move(d), {}};
  return PADYN_OK;
}

// Every failure here is a bad argument, including a degenerate bound.
template <class F>
padyn_status bound_guarded(F&& f) {
  const padyn_status st = guarded(std::forward<F>(f));
  return st == PADYN_OK ? st : PADYN_USAGE;
}

}  // namespace

extern "C" {

const char* padyn_version(void) { return padyn::kVersion; }

const char* padyn_last_error(void) { return last_error.c_str(); }

padyn_status padyn_session_open_text(const char* text, padyn_session** out) {
  if (!text || !out) return fail(PADYN_NULL_ARG, "null argument");
  *out = nullptr;
  return guarded([&] { return open_with(padyn::parse_map_description(text), out); });
}

padyn_status padyn_session_open_file(const char* path, padyn_session** out) {
  if (!path || !out) return fail(PADYN_NULL_ARG, "null argument");
  *out = nullptr;
  return guarded([&] { return open_with(padyn::load_map_description(path), out); });
}

void padyn_session_close(padyn_session* s) { delete s; }

padyn_status padyn_session_set_option(padyn_session* s, const char* key, const char* value) {
  if (!s || !key || !value) return fail(PADYN_NULL_ARG, "null argument");
  return guarded([&] {
    const std::string k = key;
    if (k == "precision")
      s->opts.precision = to_int(value);
    else if (k == "val_floor")
      s->opts.val_floor = to_int(value);
    else if (k == "shell_period_cap")
      s->opts.shell_period_cap = to_int(value);
    else if (k == "point")
      s->opts.point = value;
    else
      return fail(PADYN_USAGE, "unknown option '" + k + "'");
    return PADYN_OK;
  });
}

padyn_status padyn_run(padyn_session* s, const char* subcommand, int json, char** report) {
  if (!s || !subcommand || !report) return fail(PADYN_NULL_ARG, "null argument");
  *report = nullptr;
  return guarded([&] {
    padyn::RunOptions o = s->opts;
    o.json = json != 0;
    const padyn::RunResult r = padyn::run(subcommand, s->desc, o);
    if (!r.output.empty()) {
      *report = dup(r.output);
      if (!*report) return fail(PADYN_PRECISION, "out of memory");
    }
    if (!r.error.empty()) last_error = r.error;
    return from_exit(r.code);
  });
}

void padyn_string_free(char* str) { std::free(str); }

padyn_status padyn_bound_general(uint64_t count, uint64_t p, int e, uint64_t q, int dprime, uint64_t* out) {
  if (!out) return fail(PADYN_NULL_ARG, "null argument");
  return bound_guarded([&] {
    const padyn::BigInt b = padyn::bound_general({padyn::BigInt(count), p, e, padyn::BigInt(q), dprime});
    if (b > std::numeric_limits<uint64_t>::max()) return fail(PADYN_USAGE, "bound exceeds 64 bits");
    *out = static_cast<uint64_t>(b);
    return PADYN_OK;
  });
}

padyn_status padyn_bound_cubic(uint64_t p, int e, uint64_t q, uint64_t* out) {
  if (!out) return fail(PADYN_NULL_ARG, "null argument");
  return bound_guarded([&] {
    const padyn::BigInt b = padyn::bound_cubic(p, e, padyn::BigInt(q));
    if (b > std::numeric_limits<uint64_t>::max()) return fail(PADYN_USAGE, "bound exceeds 64 bits");
    *out = static_cast<uint64_t>(b);
    return PADYN_OK;
  });
}

}  // extern "C"
