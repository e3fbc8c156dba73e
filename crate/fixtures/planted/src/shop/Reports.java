package shop;

public class Reports {
    public double pct(Object v) {
        Statistics stats = statistics();
        stats.refresh();
        return getCumPct((Comparable<?>) v);
    }

    public double share(Object v) {
        Statistics stats = statistics();
        return getPct((Comparable<?>) v);
    }

    public String render(Table table) {
        StringBuilder out = new StringBuilder();
        for (int i = 0; i < table.rows(); i++)
            out.append(table.row(i)).append('\n');
        return out.toString();
    }

    public String renderBody(Table table) {
        StringBuilder body = new StringBuilder();
        for (int i = 0; i < table.rows() - 1; i++)
            body.append(table.row(i));
        return body.toString();
    }

    public int countRows(Report report) {
        int count = 0;
        count += report.rows().size();
        count += report.footer().size();
        return count;
    }

    public int visibleCount(Report report) {
        int visible = 0;
        visible += report.header().size();
        count += report.visibleRows().size();
        return visible + count;
    }
}
