// Minimal report viewer: clicking a marker highlights every span of its error.
(function () {
  document.addEventListener("click", function (event) {
    var marker = event.target.closest(".error-marker");
    if (!marker) return;
    var id = marker.getAttribute("data-error-id");
    var spans = document.querySelectorAll('.error-span[data-error-id="' + id + '"]');
    var on = !marker.classList.contains("active");
    document.querySelectorAll(".error-marker.active").forEach(function (m) { m.classList.remove("active"); });
    document.querySelectorAll(".error-span.highlighted").forEach(function (s) { s.classList.remove("highlighted"); });
    if (!on) return;
    marker.classList.add("active");
    spans.forEach(function (s) { s.classList.add("highlighted"); });
  });
})();
