// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/cli.hpp"

int main(int argc, char** argv) { return longmem::run_cli(argc, argv); }
