// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The beamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMLEARN_BEAMLEARN_HPP
#define BEAMLEARN_BEAMLEARN_HPP

#include "beamlearn/array_channel.hpp"
#include "beamlearn/codebook.hpp"
#include "beamlearn/dataset.hpp"
#include "beamlearn/error.hpp"
#include "beamlearn/evaluation.hpp"
#include "beamlearn/forward.hpp"
#include "beamlearn/kv_config.hpp"
#include "beamlearn/trainer.hpp"

#endif // BEAMLEARN_BEAMLEARN_HPP
