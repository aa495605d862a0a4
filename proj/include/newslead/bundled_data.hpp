#pragma once

// Contents of the data/ files, baked in at build time so binaries work
// without a data directory. The files stay the single source of truth.

namespace newslead::bundled {

const char* stopwords_text();
const char* prefix_patterns_text();

}  // namespace newslead::bundled
