// Copyright 2026 The rdgroupoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "rdg/error.hpp"
#include "rdg/groupoid.hpp"
#include "rdg/homomorphism.hpp"
#include "rdg/constructions.hpp"
#include "rdg/length.hpp"
#include "rdg/cocycle.hpp"
#include "rdg/function.hpp"
#include "rdg/spectral.hpp"
#include "rdg/norms.hpp"
#include "rdg/metric_space.hpp"
#include "rdg/rd.hpp"
#include "rdg/metric.hpp"
#include "rdg/permanence.hpp"
#include "rdg/io.hpp"
