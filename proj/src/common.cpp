#include "spinpair/common.hpp"

#include <charconv>
#include <system_error>

namespace spinpair {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    throw NumericalError("format_double: conversion failed");
  return std::string(buf, ptr);
}

}  // namespace spinpair
