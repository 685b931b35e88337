// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pss/closed_forms.hpp"
#include "pss/common.hpp"
#include "pss/config.hpp"
#include "pss/dense.hpp"
#include "pss/distinct_sum.hpp"
#include "pss/experiments.hpp"
#include "pss/format.hpp"
#include "pss/geometry.hpp"
#include "pss/moments.hpp"
#include "pss/rng.hpp"
#include "pss/single_photon.hpp"
#include "pss/states.hpp"
#include "pss/sweep.hpp"
#include "pss/witness.hpp"
