#pragma once

namespace heraldmis {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level comes from HERALDMIS_LOG (error|warn|info|debug), default warn.
LogLevel log_level();
void set_log_level(LogLevel lvl);

void log_msg(LogLevel lvl, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

#define HERALDMIS_LOG_FN(name, lvl)                      \
  template <typename... Args>                            \
  inline void name(const char* fmt, Args... args) {      \
    log_msg(lvl, fmt, args...);                          \
  }
HERALDMIS_LOG_FN(log_error, LogLevel::Error)
HERALDMIS_LOG_FN(log_warn, LogLevel::Warn)
HERALDMIS_LOG_FN(log_info, LogLevel::Info)
HERALDMIS_LOG_FN(log_debug, LogLevel::Debug)
#undef HERALDMIS_LOG_FN

}  // namespace heraldmis
