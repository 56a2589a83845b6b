/* Stub payload asset. The real in-page payload is built from frontend/
 * and served by pointing --ui-assets at its dist directory. This stub
 * only proves the injection and bootstrap plumbing end to end. */
(function () {
  "use strict";
  var el = document.currentScript;
  if (!el) return;
  var raw = el.getAttribute("data-fpguard-config");
  if (!raw) return;
  try {
    var config = JSON.parse(atob(raw));
    window.__fpguardStubConfig = config;
  } catch (e) {
    /* bootstrap unreadable: stay inert */
  }
})();
