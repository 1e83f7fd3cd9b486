// Copyright 2026 The subvertlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBVERTLAB_SUBVERTLAB_HPP_
#define SUBVERTLAB_SUBVERTLAB_HPP_

#include "subvertlab/adversaries.hpp"
#include "subvertlab/algorithm.hpp"
#include "subvertlab/asa.hpp"
#include "subvertlab/bits.hpp"
#include "subvertlab/channel.hpp"
#include "subvertlab/derived_channels.hpp"
#include "subvertlab/distribution.hpp"
#include "subvertlab/encryption.hpp"
#include "subvertlab/errors.hpp"
#include "subvertlab/games.hpp"
#include "subvertlab/lowerbound.hpp"
#include "subvertlab/prf.hpp"
#include "subvertlab/rejsam.hpp"
#include "subvertlab/report.hpp"
#include "subvertlab/rng.hpp"
#include "subvertlab/signature.hpp"
#include "subvertlab/stego_from_asa.hpp"
#include "subvertlab/views.hpp"

#endif  // SUBVERTLAB_SUBVERTLAB_HPP_
