package shop;

public class Inventory {
    public boolean needsRestock(Stock stock) {
        int threshold = policy.minimumFor(stock.sku());
        if (stock.level() < threshold)
            return true;
        return stock.reserved() > stock.level();
    }

    public void receive(Shipment shipment) {
        Stock stock = warehouse.find(shipment.sku());
        stock.add(shipment.quantity());
        warehouse.save(stock);
        events.publish(new StockReceived(stock.sku()));
    }

    public int reserve(String sku, int wanted) {
        Stock stock = warehouse.find(sku);
        int available = stock.level() - stock.reserved();
        int granted = Math.min(available, wanted);
        stock.reserve(granted);
        warehouse.save(stock);
        return granted;
    }

    public void audit(Warehouse site) {
        List<Stock> all = site.stocks();
        int missing = 0;
        for (Stock s : all)
            missing += s.expected() - s.level();
        report.missingItems(site.code(), missing);
    }

    public boolean lowOnShelf(Stock stock, int threshold) {
        int onShelf = stock.level() - stock.backroom();
        if (stock.level() <= threshold)
            return onShelf < stock.facings();
        return false;
    }
}
