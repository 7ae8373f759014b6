// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hired/allocator.hpp"
#include "hired/config.hpp"
#include "hired/dump.hpp"
#include "hired/efficiency.hpp"
#include "hired/error.hpp"
#include "hired/geometry.hpp"
#include "hired/manifest.hpp"
#include "hired/npy.hpp"
#include "hired/selector.hpp"
#include "hired/tensor.hpp"
#include "hired/version.hpp"
