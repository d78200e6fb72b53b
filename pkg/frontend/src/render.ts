/** Math rendering: server LaTeX strings typeset in-browser when KaTeX is
 * present, shown verbatim otherwise. The string content is never edited,
 * so what you see is byte-identical to the server's formatting. */

declare global {
  interface Window {
    katex?: { renderToString(tex: string, opts?: object): string };
  }
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function mathHtml(latex: string): string {
  if (typeof window !== "undefined" && window.katex) {
    try {
      return window.katex.renderToString(latex, { throwOnError: false });
    } catch {
      /* fall through to verbatim */
    }
  }
  return `<code class="latex">${escapeHtml(latex)}</code>`;
}
